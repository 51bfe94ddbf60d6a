"""
Exact convex polyhedra.

- HPolyhedron: finite list of a(x) <= b
- VPolytope: irredundant vertex list, order-independent equality
- dual_description: H -> V by the double description method on the homogenized cone
  {(x, t) : a.x - b t <= 0, t >= 0}; rows inserted in lexicographic order
- classify: Empty | LowerDim(k) | Unbounded | BoundedFullDim via exact LP
- facets: V -> H by running the same engine on the polar cone {(a, beta) : a.v <= beta}
- volume: recursive triangulation through the face lattice, |det|/k! per simplex
- extreme_points / extreme_forms: minimal generating subsets
"""

from __future__ import annotations
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from . import lp
from .errors import DegeneratePolytope, DimensionMismatch, UnboundedPolyhedron
from .exact import (
    LinearForm, QVector, affine_rank, common_denominator, primitive_integer,
    rank, solve, vector, vsub, _echelon,
)

logger = logging.getLogger("polyhedra")

EMPTY = "Empty"
LOWER_DIM = "LowerDim"
UNBOUNDED = "Unbounded"
BOUNDED_FULL_DIM = "BoundedFullDim"

Inequality = Tuple[LinearForm, Fraction]


# =============================================================================
# Types
# =============================================================================

@dataclass(frozen=True)
class HPolyhedron:
    """{x in R^dim : a(x) <= b for every (a, b)}"""
    dim: int
    inequalities: Tuple[Inequality, ...] = ()

    def __post_init__(self):
        ineqs = []
        for a, b in self.inequalities:
            if not isinstance(a, LinearForm):
                a = LinearForm(tuple(a))
            if a.dim != self.dim:
                raise DimensionMismatch(f"dimension mismatch: inequality on R^{a.dim} in R^{self.dim}")
            ineqs.append((a, Fraction(b)))
        object.__setattr__(self, "inequalities", tuple(ineqs))

    @classmethod
    def box(cls, lower: Sequence, upper: Sequence) -> "HPolyhedron":
        n = len(lower)
        ineqs = []
        for i in range(n):
            ineqs.append((LinearForm.unit(n, i), Fraction(upper[i])))
            ineqs.append((LinearForm.unit(n, i, -1), -Fraction(lower[i])))
        return cls(n, tuple(ineqs))

    def __len__(self) -> int:
        return len(self.inequalities)

    def __iter__(self):
        return iter(self.inequalities)

    def contains(self, x: Sequence) -> bool:
        return all(a(x) <= b for a, b in self.inequalities)

    def interior(self, x: Sequence) -> bool:
        return all(a(x) < b for a, b in self.inequalities)

    def extended(self, extra: Iterable[Inequality]) -> "HPolyhedron":
        return HPolyhedron(self.dim, self.inequalities + tuple(extra))

    def intersect(self, other: "HPolyhedron") -> "HPolyhedron":
        return self.extended(other.inequalities)

    def matrix(self) -> Tuple[List[Tuple[Fraction, ...]], List[Fraction]]:
        return [a.coeffs for a, _ in self.inequalities], [b for _, b in self.inequalities]


@dataclass(frozen=True)
class VPolytope:
    """Convex hull of its vertices; vertices are stored sorted, so equality is set equality."""
    vertices: Tuple[QVector, ...]

    def __post_init__(self):
        verts = sorted(set(vector(v) for v in self.vertices))
        object.__setattr__(self, "vertices", tuple(verts))

    @property
    def dim(self) -> int:
        return len(self.vertices[0]) if self.vertices else 0

    @property
    def vertex_set(self) -> FrozenSet[QVector]:
        return frozenset(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)


@dataclass(frozen=True)
class Classification:
    kind: str
    dim: Optional[int] = None
    ray: Optional[QVector] = None
    point: Optional[QVector] = None

    def __str__(self) -> str:
        return f"{self.kind}({self.dim})" if self.kind == LOWER_DIM else self.kind


@dataclass(frozen=True)
class Facet:
    """form(x) <= offset, form a primitive integer outward normal."""
    form: LinearForm
    offset: Fraction
    vertices: FrozenSet[QVector] = field(default_factory=frozenset)

    def wall_key(self) -> Tuple[Tuple[Fraction, ...], Fraction]:
        return wall_key(self.form, self.offset)

    def contains(self, x: Sequence) -> bool:
        return self.form(x) == self.offset


def wall_key(form: LinearForm, offset: Fraction) -> Tuple[Tuple[Fraction, ...], Fraction]:
    """Unsigned canonical key of the hyperplane form(x) = offset."""
    ints = primitive_integer(form.coeffs)
    scale = next(Fraction(i) / c for i, c in zip(ints, form.coeffs) if c != 0)
    off = Fraction(offset) * scale
    lead = next(i for i in ints if i != 0)
    if lead < 0:
        ints = tuple(-i for i in ints)
        off = -off
    return tuple(Fraction(i) for i in ints), off


# =============================================================================
# Double description core (integer rows, pointed cones)
# =============================================================================

def _popcount(x: int) -> int:
    return bin(x).count("1")


def _int_dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _extreme_rays(rows: List[Tuple[int, ...]], d: int) -> Optional[Tuple[List[Tuple[int, ...]], List[int]]]:
    """
    Extreme rays of the pointed cone {y in R^d : r.y <= 0 for r in rows}.

    Returns (rays, masks) where masks[k] has bit i set iff rows[i].rays[k] == 0,
    or None when the rows have rank < d (cone not pointed).
    """
    order = sorted(range(len(rows)), key=lambda i: rows[i])

    basis: List[int] = []
    echelon: List[Tuple[int, ...]] = []
    for i in order:
        if not any(rows[i]):
            continue
        if rank(echelon + [rows[i]]) > len(echelon):
            echelon.append(rows[i])
            basis.append(i)
            if len(basis) == d:
                break
    if len(basis) < d:
        return None

    basis_matrix = [rows[i] for i in basis]
    rays: List[Tuple[int, ...]] = []
    masks: List[int] = []
    all_basis_bits = 0
    for i in basis:
        all_basis_bits |= 1 << i
    for k in range(d):
        rhs = [0] * d
        rhs[k] = -1
        y = primitive_integer(solve(basis_matrix, rhs))
        rays.append(y)
        masks.append(all_basis_bits & ~(1 << basis[k]))

    in_basis = set(basis)
    for i in order:
        if i in in_basis:
            continue
        h = rows[i]
        bit = 1 << i
        vals = [_int_dot(h, r) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        if not pos:
            masks = [m | bit if vals[k] == 0 else m for k, m in enumerate(masks)]
            continue
        neg = [k for k, v in enumerate(vals) if v < 0]
        new_rays: List[Tuple[int, ...]] = []
        new_masks: List[int] = []
        for k, v in enumerate(vals):
            if v < 0:
                new_rays.append(rays[k])
                new_masks.append(masks[k])
            elif v == 0:
                new_rays.append(rays[k])
                new_masks.append(masks[k] | bit)
        for p in pos:
            for q in neg:
                common = masks[p] & masks[q]
                if _popcount(common) < d - 2:
                    continue
                if any(r != p and r != q and (masks[r] & common) == common for r in range(len(rays))):
                    continue
                combo = tuple(vals[p] * a - vals[q] * b for a, b in zip(rays[q], rays[p]))
                new_rays.append(primitive_integer(combo))
                new_masks.append(common | bit)
        rays, masks = new_rays, new_masks
    return rays, masks


def _homogenized_rows(H: HPolyhedron) -> List[Tuple[int, ...]]:
    rows = []
    for a, b in H.inequalities:
        d = common_denominator(list(a.coeffs) + [b])
        rows.append(tuple(int(c * d) for c in a.coeffs) + (int(-b * d),))
    rows.append(tuple([0] * H.dim) + (-1,))
    return rows


def _kernel_vector(rows: Sequence[Sequence], d: int) -> Tuple[Fraction, ...]:
    """A nonzero vector orthogonal to every row (rows of rank < d)."""
    ech = _echelon(rows)
    pivots = []
    reduced = [list(r) for r in ech]
    # back-substitute into reduced row echelon form
    for r in reduced:
        pivots.append(next(j for j, v in enumerate(r) if v != 0))
    free = next(j for j in range(d) if j not in pivots)
    y = [Fraction(0)] * d
    y[free] = Fraction(1)
    for r, p in reversed(list(zip(reduced, pivots))):
        s = sum((r[j] * y[j] for j in range(d) if j != p), Fraction(0))
        y[p] = -s / r[p]
    return tuple(y)


@dataclass
class _VertexData:
    vertices: List[QVector]
    incidence: List[FrozenSet[int]]


def _vertex_data(H: HPolyhedron) -> _VertexData:
    n = H.dim
    rows = _homogenized_rows(H)
    result = _extreme_rays(rows, n + 1)
    if result is None:
        # lineality: the polyhedron, if nonempty, contains a line
        if lp.feasible_point(*H.matrix(), n) is None:
            return _VertexData([], [])
        y = _kernel_vector(rows, n + 1)
        raise UnboundedPolyhedron("unbounded polyhedron (contains a line)", witness=vector(y[:n]))
    rays, masks = result
    m = len(H.inequalities)
    vertices: List[QVector] = []
    incidence: List[FrozenSet[int]] = []
    recession: List[QVector] = []
    for y, mask in zip(rays, masks):
        t = y[n]
        if t > 0:
            vertices.append(tuple(Fraction(c, t) for c in y[:n]))
            incidence.append(frozenset(i for i in range(m) if mask >> i & 1))
        else:
            recession.append(tuple(Fraction(c) for c in y[:n]))
    if vertices and recession:
        raise UnboundedPolyhedron("unbounded polyhedron", witness=recession[0])
    return _VertexData(vertices, incidence)


# =============================================================================
# Public operations
# =============================================================================

def dual_description(H: HPolyhedron) -> VPolytope:
    """Exact extreme points of a bounded H-polyhedron (empty iff H is empty)."""
    return VPolytope(tuple(_vertex_data(H).vertices))


def classify(H: HPolyhedron) -> Classification:
    n = H.dim
    A, b = H.matrix()
    feas = lp.maximize([0] * n, A, b)
    if feas.status == lp.INFEASIBLE:
        return Classification(EMPTY)

    # full dimension <=> some x satisfies every row with slack s > 0
    A_s = [list(r) + [Fraction(1)] for r in A] + [[Fraction(0)] * n + [Fraction(1)]]
    b_s = list(b) + [Fraction(1)]
    slack = lp.maximize([0] * n + [1], A_s, b_s)
    if slack.value is None or slack.value <= 0:
        implicit = []
        for (a, bi) in H.inequalities:
            res = lp.minimize(a.coeffs, A, b)
            if res.status == lp.OPTIMAL and res.value == bi:
                implicit.append(a.coeffs)
        return Classification(LOWER_DIM, dim=n - rank(implicit), point=feas.x)

    for j in range(n):
        for sign in (1, -1):
            c = [0] * n
            c[j] = sign
            res = lp.maximize(c, A, b)
            if res.status == lp.UNBOUNDED:
                return Classification(UNBOUNDED, ray=res.ray)
    return Classification(BOUNDED_FULL_DIM, dim=n, point=slack.x[:n])


def irredundant_facets(H: HPolyhedron, data: Optional[_VertexData] = None) -> List[Facet]:
    """Facet-defining rows of a bounded full-dimensional H (first row wins on duplicates)."""
    data = data or _vertex_data(H)
    n = H.dim
    if affine_rank(data.vertices) < n:
        raise DegeneratePolytope("degenerate polytope: not full-dimensional")
    seen: Dict[FrozenSet[int], bool] = {}
    facets: List[Facet] = []
    for i, (a, b) in enumerate(H.inequalities):
        tight = frozenset(k for k, inc in enumerate(data.incidence) if i in inc)
        if len(tight) < n or tight in seen:
            continue
        pts = [data.vertices[k] for k in tight]
        if affine_rank(pts) != n - 1:
            continue
        seen[tight] = True
        form = LinearForm(primitive_integer(a.coeffs))
        facets.append(Facet(form, form(pts[0]), frozenset(pts)))
    return facets


def facets(P: VPolytope) -> List[Facet]:
    """Irredundant facets a(x) <= b of a full-dimensional polytope with incident vertices."""
    verts = list(P.vertices)
    if not verts or affine_rank(verts) < P.dim:
        raise DegeneratePolytope("degenerate polytope: facets need a full-dimensional input")
    n = P.dim
    rows = []
    for v in verts:
        d = common_denominator(v)
        rows.append(tuple(int(c * d) for c in v) + (-d,))
    rays, masks = _extreme_rays(rows, n + 1)
    out: List[Facet] = []
    for y, mask in zip(rays, masks):
        if not any(y[:n]):
            continue
        form = LinearForm(y[:n])
        incident = frozenset(verts[k] for k in range(len(verts)) if mask >> k & 1)
        out.append(Facet(form, Fraction(y[n]), incident))
    out.sort(key=lambda f: (f.form.coeffs, f.offset))
    return out


def to_hpolyhedron(P: VPolytope) -> HPolyhedron:
    return HPolyhedron(P.dim, tuple((f.form, f.offset) for f in facets(P)))


def _simplex_volume(points: Sequence[QVector]) -> Fraction:
    base = points[0]
    rows = [vsub(p, base) for p in points[1:]]
    k = len(rows)
    m = [list(r) for r in rows]
    det = Fraction(1)
    for c in range(k):
        pivot = next((i for i in range(c, k) if m[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, k):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return abs(det) / factorial(k)


def triangulate(P: VPolytope, facet_list: Optional[List[Facet]] = None) -> List[Tuple[QVector, ...]]:
    """Pulling triangulation: cone the lowest vertex over the faces of each face not containing it."""
    verts = list(P.vertices)
    facet_list = facet_list if facet_list is not None else facets(P)
    index = {v: i for i, v in enumerate(verts)}
    facet_sets = [frozenset(index[v] for v in f.vertices) for f in facet_list]
    rank_cache: Dict[FrozenSet[int], int] = {}

    def face_rank(s: FrozenSet[int]) -> int:
        if s not in rank_cache:
            rank_cache[s] = affine_rank([verts[i] for i in s])
        return rank_cache[s]

    def rec(face: FrozenSet[int], k: int) -> List[Tuple[int, ...]]:
        if len(face) == k + 1:
            return [tuple(sorted(face))]
        apex = min(face)
        subfaces = set()
        for F in facet_sets:
            if face <= F:
                continue
            sub = face & F
            if len(sub) >= k and face_rank(sub) == k - 1:
                subfaces.add(sub)
        out = []
        for sub in sorted(subfaces, key=sorted):
            if apex in sub:
                continue
            for s in rec(sub, k - 1):
                out.append((apex,) + s)
        return out

    simplices = rec(frozenset(range(len(verts))), P.dim)
    return [tuple(verts[i] for i in s) for s in simplices]


def volume(P: VPolytope, facet_list: Optional[List[Facet]] = None) -> Fraction:
    """Exact Euclidean volume; lower-dimensional input gives 0 with a warning."""
    if not P.vertices or affine_rank(list(P.vertices)) < P.dim:
        logger.warning("volume of a lower-dimensional polytope requested; returning 0")
        return Fraction(0)
    return sum((_simplex_volume(s) for s in triangulate(P, facet_list)), Fraction(0))


def extreme_points(points: Sequence[Sequence]) -> List[QVector]:
    """Extreme points of conv(points), in input order, duplicates dropped."""
    uniq: List[QVector] = []
    seen = set()
    for p in points:
        v = vector(p)
        if v not in seen:
            seen.add(v)
            uniq.append(v)
    if len(uniq) <= 1:
        return uniq
    n = len(uniq[0])
    if affine_rank(uniq) == n:
        rows = []
        for v in uniq:
            d = common_denominator(v)
            rows.append(tuple(int(c * d) for c in v) + (-d,))
        rays, masks = _extreme_rays(rows, n + 1)
        normals: List[List[Tuple[int, ...]]] = [[] for _ in uniq]
        for y, mask in zip(rays, masks):
            if not any(y[:n]):
                continue
            for k in range(len(uniq)):
                if mask >> k & 1:
                    normals[k].append(y[:n])
        return [v for v, ns in zip(uniq, normals) if ns and rank(ns) == n]
    return [p for p in uniq if not _in_hull(p, [q for q in uniq if q != p])]


def _in_hull(p: QVector, others: List[QVector]) -> bool:
    k = len(others)
    if k == 0:
        return False
    n = len(p)
    A: List[List[Fraction]] = []
    b: List[Fraction] = []
    for j in range(k):
        row = [Fraction(0)] * k
        row[j] = Fraction(-1)
        A.append(row)
        b.append(Fraction(0))
    A.append([Fraction(1)] * k)
    b.append(Fraction(1))
    A.append([Fraction(-1)] * k)
    b.append(Fraction(-1))
    for c in range(n):
        A.append([Fraction(o[c]) for o in others])
        b.append(Fraction(p[c]))
        A.append([-Fraction(o[c]) for o in others])
        b.append(-Fraction(p[c]))
    return lp.feasible_point(A, b, k) is not None


def extreme_forms(forms: Sequence[LinearForm]) -> List[LinearForm]:
    """Minimal subset with the same pointwise maximum: the extreme points of conv(forms)."""
    pts = extreme_points([f.coeffs for f in forms])
    return [LinearForm(p) for p in pts]


def describe(H: HPolyhedron) -> Tuple[VPolytope, List[Facet]]:
    """Vertices and irredundant facets of a bounded full-dimensional H from one DD pass."""
    data = _vertex_data(H)
    return VPolytope(tuple(data.vertices)), irredundant_facets(H, data)
