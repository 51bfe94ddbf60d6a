"""
Affine symmetries of (Z^n, N): x -> A x + t with A in GL_n(Z) preserving the
form set and t in Z^n.

point_group backtracks over images of a basis of forms. A form lying in the
span of the first k basis forms has its image fixed once the first k images
are chosen, so it must land in the form set again; that prunes early.
"""

from __future__ import annotations
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from .errors import JobError
from .exact import (
    IntMatrix, IntVector, QVector, _echelon, centroid, identity, is_integral,
    mat_mul, mat_vec, to_int_vector, vadd, vsub,
)
from .norms import PolyhedralNorm
from .polyhedra import Facet, VPolytope

logger = logging.getLogger("symmetry")


@dataclass(frozen=True)
class AffineSymmetry:
    linear: IntMatrix
    shift: IntVector

    def __call__(self, x: Sequence) -> QVector:
        return vadd(mat_vec(self.linear, x), self.shift)

    def polytope(self, P: VPolytope) -> VPolytope:
        return VPolytope(tuple(self(v) for v in P.vertices))


@dataclass(frozen=True)
class PointGroup:
    generators: Tuple[IntMatrix, ...]
    elements: Tuple[IntMatrix, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def dim(self) -> int:
        return len(self.elements[0])

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, A) -> bool:
        return _as_matrix(A) in set(self.elements)


def _as_matrix(A: Sequence[Sequence]) -> IntMatrix:
    return tuple(tuple(int(v) for v in row) for row in A)


def determinant(A: Sequence[Sequence]) -> int:
    return int(sympy.Matrix(A).det())


def _rational_inverse(rows: Sequence[Sequence]) -> List[List[Fraction]]:
    inv = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in map(Fraction, r)] for r in rows]).inv()
    return [[Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(inv.cols)] for i in range(inv.rows)]


def inverse(A: Sequence[Sequence]) -> IntMatrix:
    """Inverse of a unimodular integer matrix."""
    return _unimodular_inverse(_as_matrix(A))


@lru_cache(maxsize=None)
def _unimodular_inverse(A: IntMatrix) -> IntMatrix:
    return tuple(tuple(int(v) for v in row) for row in _rational_inverse(A))


def preserves(norm: PolyhedralNorm, A: Sequence[Sequence]) -> bool:
    """{l o A : l in forms} == forms."""
    keys = norm.form_set()
    return all(f.compose(A).coeffs in keys for f in norm.forms)


# =============================================================================
# Groups
# =============================================================================

def group_closure(generators: Sequence[Sequence[Sequence]], n: Optional[int] = None, limit: Optional[int] = None) -> List[IntMatrix]:
    if limit is None:
        from config import MAX_GROUP_ORDER
        limit = MAX_GROUP_ORDER
    gens = [_as_matrix(g) for g in generators]
    if n is None:
        n = len(gens[0]) if gens else 0
    one = identity(n)
    seen = {one}
    frontier = [one]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = mat_mul(a, g)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
                    if len(seen) > limit:
                        raise JobError(f"job-error: group order exceeds {limit}")
        frontier = nxt
    return sorted(seen)


def _generating_set(elements: Sequence[IntMatrix], n: int) -> Tuple[IntMatrix, ...]:
    one = identity(n)
    gens: List[IntMatrix] = []
    closure = {one}
    for A in elements:
        if len(closure) == len(elements):
            break
        if A in closure:
            continue
        gens.append(A)
        closure = set(group_closure(gens, n, limit=len(elements)))
    return tuple(gens)


def point_group(norm: PolyhedralNorm) -> PointGroup:
    forms = [f.coeffs for f in norm.forms]
    keys = set(forms)
    n = norm.dim

    basis: List[int] = []
    for i, f in enumerate(forms):
        if len(_echelon([forms[j] for j in basis] + [f])) > len(basis):
            basis.append(i)
        if len(basis) == n:
            break
    B = [forms[i] for i in basis]
    B_inv = _rational_inverse(B)

    # coordinates of every form in the chosen basis, bucketed by the last basis index used
    checks: Dict[int, List[List[Fraction]]] = {k: [] for k in range(n)}
    for f in forms:
        c = [sum((f[i] * B_inv[i][j] for i in range(n)), Fraction(0)) for j in range(n)]
        last = max(j for j in range(n) if c[j] != 0)
        checks[last].append(c)

    elements: List[IntMatrix] = []
    images: List[Tuple[Fraction, ...]] = []

    def consistent(k: int) -> bool:
        for c in checks[k]:
            img = tuple(sum((c[i] * images[i][j] for i in range(k + 1)), Fraction(0)) for j in range(n))
            if img not in keys:
                return False
        return True

    def search(k: int) -> None:
        if k == n:
            A = [[sum((B_inv[i][m] * images[m][j] for m in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]
            if not all(is_integral(row) for row in A):
                return
            A_int = tuple(to_int_vector(row) for row in A)
            if abs(determinant(A_int)) != 1:
                return
            elements.append(A_int)
            return
        for f in forms:
            if len(_echelon(images + [f])) <= k:
                continue
            images.append(f)
            if consistent(k):
                search(k + 1)
            images.pop()

    search(0)
    elements.sort()
    from config import MAX_GROUP_ORDER
    if len(elements) > MAX_GROUP_ORDER:
        logger.warning("point group of order %d exceeds MAX_GROUP_ORDER=%d", len(elements), MAX_GROUP_ORDER)
    logger.info("point group of order %d", len(elements))
    return PointGroup(_generating_set(elements, n), tuple(elements))


def group_from_generators(norm: PolyhedralNorm, generators: Sequence[Sequence[Sequence]]) -> PointGroup:
    """Closure of user-supplied generators, each checked against the norm."""
    n = norm.dim
    gens = []
    for g in generators:
        A = _as_matrix(g)
        if len(A) != n or any(len(r) != n for r in A):
            raise JobError(f"job-error: generator is not {n}x{n}")
        if abs(determinant(A)) != 1:
            raise JobError("job-error: generator is not in GL_n(Z)")
        if not preserves(norm, A):
            raise JobError("job-error: generator does not preserve the norm")
        gens.append(A)
    return PointGroup(tuple(gens), tuple(group_closure(gens, n)))


# =============================================================================
# Polytopes under the group
# =============================================================================

def isobarycenter(P: VPolytope) -> QVector:
    if not P.vertices:
        raise ValueError("isobarycenter of an empty polytope")
    return centroid(list(P.vertices))


def _matches(P: VPolytope, Q: VPolytope, A: IntMatrix, iso_p: QVector, iso_q: QVector) -> Optional[AffineSymmetry]:
    t = vsub(iso_q, mat_vec(A, iso_p))
    if not is_integral(t):
        return None
    g = AffineSymmetry(A, to_int_vector(t))
    target = Q.vertex_set
    if all(g(v) in target for v in P.vertices):
        return g
    return None


def equivalent(P: VPolytope, Q: VPolytope, group: PointGroup) -> Optional[AffineSymmetry]:
    """Some g with g(P) = Q, or None."""
    if len(P) != len(Q):
        return None
    iso_p, iso_q = isobarycenter(P), isobarycenter(Q)
    for A in group.elements:
        g = _matches(P, Q, A, iso_p, iso_q)
        if g is not None:
            return g
    return None


def stabilizer(P: VPolytope, group: PointGroup) -> List[AffineSymmetry]:
    iso = isobarycenter(P)
    out = []
    for A in group.elements:
        g = _matches(P, P, A, iso, iso)
        if g is not None:
            out.append(g)
    return out


def facet_orbits(facet_list: Sequence[Facet], stab: Sequence[AffineSymmetry]) -> List[List[int]]:
    """Orbits of facets (by incident vertex set) under the stabilizer, each sorted, listed by first member."""
    index = {f.vertices: i for i, f in enumerate(facet_list)}
    parent = list(range(len(facet_list)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for g in stab:
        for i, f in enumerate(facet_list):
            j = index.get(frozenset(g(v) for v in f.vertices))
            if j is None:
                continue
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)

    orbits: Dict[int, List[int]] = {}
    for i in range(len(facet_list)):
        orbits.setdefault(find(i), []).append(i)
    return sorted(orbits.values(), key=lambda o: o[0])
