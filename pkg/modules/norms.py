"""
Polyhedral norms N(x) = max over forms l of l(x), and the affine hyperplane
arrangements (AHA) adapted to them.

An arrangement is adapted when every cell E and every lattice point v admit a
single form l with l'(x - v) <= l(x - v) on all of E; dominant_form checks that
on the cell's vertices.
"""

from __future__ import annotations
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import List, Optional, Sequence, Tuple

from . import lp
from .errors import (
    DegenerateNorm, DimensionMismatch, IncompatibleStrategy, NotAdapted,
    NotPositiveDefinite, OnWall,
)
from .exact import IntVector, LinearForm, QVector, primitive_step, rank, vector, vsub
from .polyhedra import HPolyhedron, dual_description, extreme_forms

logger = logging.getLogger("norms")

GENERIC = "generic"
SYMMETRIC = "symmetric"
L1_SPECIAL = "l1"
LINF_SPECIAL = "linf"
AUTO = "auto"
STRATEGIES = (AUTO, GENERIC, SYMMETRIC, L1_SPECIAL, LINF_SPECIAL)


# =============================================================================
# Norms
# =============================================================================

@dataclass(frozen=True)
class PolyhedralNorm:
    forms: Tuple[LinearForm, ...]
    symmetric: bool
    simplicial: bool = False

    @property
    def dim(self) -> int:
        return self.forms[0].dim

    def value(self, x: Sequence) -> Fraction:
        return max(f(x) for f in self.forms)

    def __call__(self, x: Sequence) -> Fraction:
        return self.value(x)

    def form_set(self) -> frozenset:
        return frozenset(f.coeffs for f in self.forms)


def canonical_key(form: LinearForm) -> IntVector:
    """Primitive integer vector with positive leading entry; merges sign and scale."""
    return form.canonical().coeffs


def l1_forms(n: int) -> List[LinearForm]:
    return [LinearForm(signs) for signs in itertools.product((1, -1), repeat=n)]


def linf_forms(n: int) -> List[LinearForm]:
    out = []
    for i in range(n):
        out.append(LinearForm.unit(n, i))
        out.append(LinearForm.unit(n, i, -1))
    return out


def validate_norm(forms: Sequence) -> PolyhedralNorm:
    forms = [f if isinstance(f, LinearForm) else LinearForm(tuple(f)) for f in forms]
    if not forms:
        raise DegenerateNorm("degenerate norm: no forms")
    n = forms[0].dim
    if any(f.dim != n for f in forms):
        raise DimensionMismatch("dimension mismatch: forms of different lengths")
    minimal = extreme_forms(forms)
    if rank([f.coeffs for f in minimal]) < n:
        raise DegenerateNorm("degenerate norm: forms do not span the dual space")

    # 0 interior to conv(forms) <=> no x != 0 with l(x) <= 0 for every l
    A = [list(f.coeffs) for f in minimal]
    b = [Fraction(0)] * len(minimal)
    for i in range(n):
        A.append([Fraction(1 if j == i else 0) for j in range(n)])
        A.append([Fraction(-1 if j == i else 0) for j in range(n)])
        b += [Fraction(1), Fraction(1)]
    objective = [-sum(f.coeffs[j] for f in minimal) for j in range(n)]
    res = lp.maximize(objective, A, b)
    if res.optimal and res.value > 0:
        raise NotPositiveDefinite("not positive definite: N(x) <= 0 for some x != 0", witness=res.x)

    keys = {f.coeffs for f in minimal}
    symmetric = all((-f).coeffs in keys for f in minimal)
    norm = PolyhedralNorm(tuple(minimal), symmetric, simplicial=len(minimal) == n + 1)
    logger.debug("validated norm on R^%d: %d forms, symmetric=%s", n, len(minimal), symmetric)
    return norm


def norm_value(norm: PolyhedralNorm, x: Sequence) -> Tuple[Fraction, List[LinearForm]]:
    values = [f(x) for f in norm.forms]
    top = max(values)
    return top, [f for f, v in zip(norm.forms, values) if v == top]


# =============================================================================
# Adapted sets
# =============================================================================

def _dedupe(forms: Sequence[LinearForm]) -> List[LinearForm]:
    seen = set()
    out = []
    for f in forms:
        if f.is_zero():
            continue
        key = canonical_key(f)
        if key not in seen:
            seen.add(key)
            out.append(LinearForm(key))
    return out


def _scaled_copy_of(norm: PolyhedralNorm, reference: List[LinearForm]) -> bool:
    if len(norm.forms) != len(reference):
        return False
    c = max(abs(x) for x in norm.forms[0].coeffs)
    if c == 0:
        return False
    return norm.form_set() == frozenset(f.scaled(c).coeffs for f in reference)


def is_l1(norm: PolyhedralNorm) -> bool:
    return _scaled_copy_of(norm, l1_forms(norm.dim))


def is_linf(norm: PolyhedralNorm) -> bool:
    return _scaled_copy_of(norm, linf_forms(norm.dim))


def resolve_strategy(norm: PolyhedralNorm, strategy: str = AUTO) -> str:
    if strategy != AUTO:
        return strategy
    if is_l1(norm):
        return L1_SPECIAL
    if is_linf(norm) and norm.dim >= 2:
        return LINF_SPECIAL
    if norm.symmetric:
        return SYMMETRIC
    return GENERIC


def adapted_set(norm: PolyhedralNorm, strategy: str = AUTO) -> List[LinearForm]:
    strategy = resolve_strategy(norm, strategy)
    n = norm.dim
    if strategy == GENERIC:
        out = _dedupe([a - b for a in norm.forms for b in norm.forms if a != b])
    elif strategy == SYMMETRIC:
        if not norm.symmetric:
            raise IncompatibleStrategy("incompatible strategy: symmetric needs L = -L")
        parallel = {canonical_key(f) for f in norm.forms}
        out = [f for f in _dedupe([a - b for a in norm.forms for b in norm.forms if a != b])
               if canonical_key(f) not in parallel]
    elif strategy == L1_SPECIAL:
        if not is_l1(norm):
            raise IncompatibleStrategy("incompatible strategy: l1 needs the L1 form set")
        out = [LinearForm.unit(n, i) for i in range(n)]
    elif strategy == LINF_SPECIAL:
        if n < 2 or not is_linf(norm):
            raise IncompatibleStrategy("incompatible strategy: linf needs the L-infinity form set in dimension >= 2")
        pairs = []
        for i, j in itertools.combinations(range(n), 2):
            for s in (1, -1):
                c = [0] * n
                c[i], c[j] = 1, s
                pairs.append(LinearForm(tuple(c)))
        out = _dedupe(pairs)
    else:
        raise IncompatibleStrategy(f"incompatible strategy: unknown strategy {strategy!r}")
    if rank([f.coeffs for f in out]) < n:
        raise IncompatibleStrategy(f"incompatible strategy: {strategy} set does not span")
    return out


# =============================================================================
# Arrangements
# =============================================================================

@dataclass(frozen=True)
class ArrangementClass:
    """Hyperplanes {x : form(x) = k * step}, k in Z; form(witness) = step."""
    form: LinearForm
    step: Fraction
    witness: IntVector


@dataclass(frozen=True)
class ArrangementAHA:
    classes: Tuple[ArrangementClass, ...]

    @property
    def dim(self) -> int:
        return self.classes[0].form.dim

    def __len__(self) -> int:
        return len(self.classes)


@dataclass(frozen=True)
class CellSignature:
    """k_i with k_i * step_i < form_i(x) < (k_i + 1) * step_i."""
    indices: Tuple[int, ...]


def build_aha(forms: Sequence[LinearForm]) -> ArrangementAHA:
    classes = []
    seen = set()
    for f in forms:
        w, step = primitive_step(f)
        key = canonical_key(f)
        if key in seen:
            continue
        seen.add(key)
        classes.append(ArrangementClass(f, step, w))
    return ArrangementAHA(tuple(classes))


def signature(aha: ArrangementAHA, x: Sequence) -> CellSignature:
    x = vector(x)
    indices = []
    for i, c in enumerate(aha.classes):
        r = c.form(x) / c.step
        if r.denominator == 1:
            raise OnWall(f"on-wall: point lies on a hyperplane of class {i}", class_index=i, witness=x)
        indices.append(floor(r))
    return CellSignature(tuple(indices))


def cell_polyhedron(aha: ArrangementAHA, sig: CellSignature) -> HPolyhedron:
    ineqs = []
    for c, k in zip(aha.classes, sig.indices):
        ineqs.append((c.form, (k + 1) * c.step))
        ineqs.append((-c.form, -k * c.step))
    return HPolyhedron(aha.dim, tuple(ineqs))


def cell_of_point(aha: ArrangementAHA, x: Sequence) -> Tuple[CellSignature, HPolyhedron]:
    sig = signature(aha, x)
    return sig, cell_polyhedron(aha, sig)


def dominant_form(
    norm: PolyhedralNorm,
    cell: HPolyhedron,
    v: Sequence,
    vertices: Optional[Sequence[QVector]] = None,
) -> LinearForm:
    """First form l (in norm order) with l'(x - v) <= l(x - v) on the whole cell."""
    if vertices is None:
        vertices = dual_description(cell).vertices
    shifted = [vsub(p, v) for p in vertices]
    table = [[f(s) for s in shifted] for f in norm.forms]
    for i, row in enumerate(table):
        if all(all(other[k] <= row[k] for k in range(len(shifted))) for other in table):
            return norm.forms[i]
    raise NotAdapted("AHA not adapted: no dominant form on this cell", witness=tuple(v))
