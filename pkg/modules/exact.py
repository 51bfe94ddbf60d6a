"""
Exact geometry primitives.

- Rational: fractions.Fraction (always reduced, denominator > 0)
- QVector: tuple of Fractions (lattice points may be tuples of ints; they compare and hash equal)
- LinearForm / AffineFunctional: immutable, exact evaluation
- IntMatrix: tuple of int rows; symmetries live in GL_n(Z)
- primitive_step: the Bezout certificate behind the translation classes of an arrangement

Nothing in here touches floating point.
"""

from __future__ import annotations
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, List, Sequence, Tuple

from .errors import DegenerateForm, DimensionMismatch

Rational = Fraction
QVector = Tuple[Fraction, ...]
IntVector = Tuple[int, ...]
IntMatrix = Tuple[Tuple[int, ...], ...]


# ---------- vectors ----------

def vector(values: Iterable) -> QVector:
    return tuple(Fraction(v) for v in values)


def zero(n: int) -> QVector:
    return tuple(Fraction(0) for _ in range(n))


def unit_vector(n: int, i: int) -> IntVector:
    return tuple(1 if j == i else 0 for j in range(n))


def _check_dims(a: Sequence, b: Sequence) -> None:
    if len(a) != len(b):
        raise DimensionMismatch(f"dimension mismatch: {len(a)} vs {len(b)}")


def vadd(a: Sequence, b: Sequence) -> QVector:
    _check_dims(a, b)
    return tuple(Fraction(x) + y for x, y in zip(a, b))


def vsub(a: Sequence, b: Sequence) -> QVector:
    _check_dims(a, b)
    return tuple(Fraction(x) - y for x, y in zip(a, b))


def vscale(q, a: Sequence) -> QVector:
    q = Fraction(q)
    return tuple(q * x for x in a)


def is_integral(x: Sequence) -> bool:
    return all(Fraction(c).denominator == 1 for c in x)


def to_int_vector(x: Sequence) -> IntVector:
    return tuple(int(Fraction(c)) for c in x)


def centroid(points: Sequence[Sequence]) -> QVector:
    if not points:
        raise ValueError("centroid of an empty point set")
    n = len(points[0])
    k = len(points)
    return tuple(sum((Fraction(p[i]) for p in points), Fraction(0)) / k for i in range(n))


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b) if a and b else max(a, b)


def common_denominator(values: Iterable) -> int:
    d = 1
    for v in values:
        d = lcm(d, Fraction(v).denominator)
    return d


def primitive_integer(values: Sequence) -> IntVector:
    """Scale a rational vector by a positive factor to a primitive integer vector."""
    d = common_denominator(values)
    ints = [int(Fraction(v) * d) for v in values]
    g = 0
    for m in ints:
        g = gcd(g, abs(m))
    if g == 0:
        return tuple(ints)
    return tuple(m // g for m in ints)


# ---------- linear / affine forms ----------

@dataclass(frozen=True)
class LinearForm:
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def of(cls, *coeffs) -> "LinearForm":
        return cls(tuple(coeffs))

    @classmethod
    def unit(cls, n: int, i: int, sign: int = 1) -> "LinearForm":
        return cls(tuple(sign if j == i else 0 for j in range(n)))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __call__(self, x: Sequence) -> Fraction:
        return evaluate(self, x)

    def __neg__(self) -> "LinearForm":
        return LinearForm(tuple(-c for c in self.coeffs))

    def __add__(self, other: "LinearForm") -> "LinearForm":
        _check_dims(self.coeffs, other.coeffs)
        return LinearForm(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        _check_dims(self.coeffs, other.coeffs)
        return LinearForm(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def scaled(self, q) -> "LinearForm":
        q = Fraction(q)
        return LinearForm(tuple(q * c for c in self.coeffs))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def compose(self, matrix: Sequence[Sequence]) -> "LinearForm":
        """The form x -> self(M x); M has self.dim rows."""
        if len(matrix) != self.dim:
            raise DimensionMismatch(f"dimension mismatch: form on R^{self.dim}, matrix with {len(matrix)} rows")
        cols = len(matrix[0]) if matrix else 0
        return LinearForm(tuple(
            sum((c * Fraction(matrix[i][j]) for i, c in enumerate(self.coeffs)), Fraction(0))
            for j in range(cols)
        ))

    def primitive(self) -> IntVector:
        return primitive_integer(self.coeffs)

    def canonical(self) -> "LinearForm":
        """Primitive integer representative with positive leading entry (merges sign and scale)."""
        ints = self.primitive()
        for c in ints:
            if c != 0:
                if c < 0:
                    ints = tuple(-m for m in ints)
                break
        return LinearForm(ints)

    def key(self) -> Tuple[Fraction, ...]:
        return self.coeffs

    def __str__(self) -> str:
        return "[" + ", ".join(str(c) for c in self.coeffs) + "]"


def evaluate(form: LinearForm, x: Sequence) -> Fraction:
    _check_dims(form.coeffs, x)
    return sum((c * Fraction(v) for c, v in zip(form.coeffs, x)), Fraction(0))


@dataclass(frozen=True)
class AffineFunctional:
    """x -> form(x - base)."""
    form: LinearForm
    base: QVector

    def __post_init__(self):
        object.__setattr__(self, "base", vector(self.base))

    def __call__(self, x: Sequence) -> Fraction:
        return evaluate(self.form, vsub(x, self.base))

    @property
    def constant(self) -> Fraction:
        return -evaluate(self.form, self.base)


# ---------- integer arithmetic ----------

def egcd(a: int, b: int) -> Tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def primitive_step(form: LinearForm) -> Tuple[IntVector, Fraction]:
    """
    Smallest positive value of form on Z^n, with a lattice vector attaining it.

    Coefficients are written m_i/d over a common denominator d; the step is
    gcd(m_1..m_n)/d and w is a Bezout combination of the unit vectors.
    """
    if form.is_zero():
        raise DegenerateForm("degenerate form: the zero form has no step")
    d = common_denominator(form.coeffs)
    m = [int(c * d) for c in form.coeffs]
    n = len(m)
    g = 0
    w = [0] * n
    for i, mi in enumerate(m):
        if mi == 0:
            continue
        if g == 0:
            g = abs(mi)
            w[i] = 1 if mi > 0 else -1
            continue
        if mi % g == 0:
            continue
        g2, s, t = egcd(g, mi)
        w = [s * wj for wj in w]
        w[i] = t
        g = g2
    return tuple(w), Fraction(g, d)


# ---------- matrices ----------

def identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_vec(a: Sequence[Sequence], x: Sequence) -> QVector:
    return tuple(sum((Fraction(r[j]) * x[j] for j in range(len(x))), Fraction(0)) for r in a)


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    cols = len(b[0])
    inner = len(b)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols))
        for i in range(len(a))
    )


def transpose(a: Sequence[Sequence]) -> tuple:
    return tuple(zip(*a)) if a else ()


def _echelon(rows: Sequence[Sequence]) -> List[List[Fraction]]:
    m = [[Fraction(v) for v in r] for r in rows]
    out: List[List[Fraction]] = []
    if not m:
        return out
    cols = len(m[0])
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(r + 1, len(m)):
            if m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return m[:r]


def rank(rows: Sequence[Sequence]) -> int:
    return len(_echelon(rows))


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull; -1 for the empty set."""
    if not points:
        return -1
    base = points[0]
    return rank([vsub(p, base) for p in points[1:]]) if len(points) > 1 else 0


def solve(a: Sequence[Sequence], b: Sequence) -> QVector:
    """Unique solution of a square nonsingular system a x = b."""
    n = len(a)
    m = [[Fraction(v) for v in a[i]] + [Fraction(b[i])] for i in range(n)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            raise ValueError("singular system")
        m[c], m[pivot] = m[pivot], m[c]
        inv = 1 / m[c][c]
        m[c] = [v * inv for v in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [u - f * v for u, v in zip(m[i], m[c])]
    return tuple(m[i][n] for i in range(n))
