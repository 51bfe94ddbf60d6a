"""
Root lattices as norm changes.

A lattice L = B Z^n is handled in Z^n coordinates: every ambient form l becomes
l o B. Ambient coordinates only come back for reporting (to_ambient).

The Euclidean Voronoi cell is computed independently of the polyhedral machinery's
VN-space search, as an exact half-space intersection in lattice coordinates.
"""

from __future__ import annotations
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, factorial
from typing import Dict, List, Sequence, Tuple

import sympy

from .errors import DimensionMismatch, JobError
from .exact import LinearForm, QVector, mat_vec, rank, transpose, vector
from .norms import PolyhedralNorm, validate_norm
from .polyhedra import HPolyhedron, VPolytope, dual_description, extreme_points, volume

logger = logging.getLogger("lattices")


@dataclass(frozen=True)
class LatticeBasis:
    """Basis vectors in R^m (rows of `vectors`); the lattice is their integer span."""
    name: str
    vectors: Tuple[QVector, ...]

    def __post_init__(self):
        vecs = tuple(vector(v) for v in self.vectors)
        if not vecs:
            raise JobError("job-error: empty basis")
        m = len(vecs[0])
        if any(len(v) != m for v in vecs):
            raise DimensionMismatch("dimension mismatch: basis vectors of different lengths")
        if rank(vecs) < len(vecs):
            raise JobError("job-error: basis vectors are linearly dependent")
        object.__setattr__(self, "vectors", vecs)

    @property
    def dim(self) -> int:
        return len(self.vectors)

    @property
    def ambient_dim(self) -> int:
        return len(self.vectors[0])

    def matrix(self) -> Tuple[Tuple[Fraction, ...], ...]:
        """m x n, columns are the basis vectors."""
        return transpose(self.vectors)


def zn_basis(n: int) -> LatticeBasis:
    if n < 1:
        raise JobError("job-error: Z^n needs n >= 1")
    return LatticeBasis(f"Z{n}", tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))


def an_basis(n: int) -> LatticeBasis:
    """e_i - e_{i+1}, i = 1..n, in R^{n+1}."""
    if n < 1:
        raise JobError("job-error: A_n needs n >= 1")
    vecs = []
    for i in range(n):
        v = [0] * (n + 1)
        v[i], v[i + 1] = 1, -1
        vecs.append(tuple(v))
    return LatticeBasis(f"A{n}", tuple(vecs))


def dn_basis(n: int) -> LatticeBasis:
    """e_1 + e_2, e_1 - e_2, e_2 - e_3, ..., e_{n-1} - e_n."""
    if n < 2:
        raise JobError("job-error: D_n needs n >= 2")
    vecs = []
    first = [0] * n
    first[0], first[1] = 1, 1
    vecs.append(tuple(first))
    for i in range(n - 1):
        v = [0] * n
        v[i], v[i + 1] = 1, -1
        vecs.append(tuple(v))
    return LatticeBasis(f"D{n}", tuple(vecs))


def pullback_norm(ambient, basis: LatticeBasis) -> PolyhedralNorm:
    """Forms l o B for l in the ambient norm, minimalised; N(a) = N_ambient(B a)."""
    forms = ambient.forms if isinstance(ambient, PolyhedralNorm) else [
        f if isinstance(f, LinearForm) else LinearForm(tuple(f)) for f in ambient
    ]
    if forms[0].dim != basis.ambient_dim:
        raise DimensionMismatch(
            f"dimension mismatch: norm on R^{forms[0].dim}, basis in R^{basis.ambient_dim}"
        )
    B = basis.matrix()
    return validate_norm([f.compose(B) for f in forms])


def to_ambient(basis: LatticeBasis, x: Sequence) -> QVector:
    return mat_vec(basis.matrix(), x)


def gram_matrix(basis: LatticeBasis) -> List[List[Fraction]]:
    vecs = basis.vectors
    return [[sum((a * b for a, b in zip(u, v)), Fraction(0)) for v in vecs] for u in vecs]


def covolume(basis: LatticeBasis):
    """sqrt(det G) as an exact sympy number."""
    G = sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in row] for row in gram_matrix(basis)])
    return sympy.sqrt(G.det())


def _quadratic(G: List[List[Fraction]], u: Sequence, w: Sequence) -> Fraction:
    n = len(G)
    return sum((Fraction(u[i]) * G[i][j] * w[j] for i in range(n) for j in range(n)), Fraction(0))


def _half_space_cell(G: List[List[Fraction]], radius: int) -> VPolytope:
    n = len(G)
    ineqs = []
    for w in itertools.product(range(-radius, radius + 1), repeat=n):
        if not any(w):
            continue
        # 2 a^T G w <= w^T G w
        coeffs = tuple(2 * sum((G[i][j] * w[j] for j in range(n)), Fraction(0)) for i in range(n))
        ineqs.append((LinearForm(coeffs), _quadratic(G, w, w)))
    return dual_description(HPolyhedron(n, tuple(ineqs)))


def euclidean_voronoi_cell(basis: LatticeBasis) -> VPolytope:
    """
    Euclidean Voronoi cell of the origin, in lattice coordinates.

    The cell cut out by |w_i| <= 1 contains the true cell; with M its largest
    coordinate, every Voronoi-relevant w has w/2 in the cell, so |w_i| <= 2M.
    """
    G = gram_matrix(basis)
    first = _half_space_cell(G, 1)
    M = max(abs(c) for v in first.vertices for c in v)
    radius = max(1, ceil(2 * M))
    cell = _half_space_cell(G, radius) if radius > 1 else first
    logger.debug("euclidean cell of %s: search radius %d, %d vertices", basis.name, radius, len(cell))
    return cell


def conjecture_check(D, basis: LatticeBasis) -> Dict[str, object]:
    """
    Compare V_<=(0) with the Euclidean Voronoi cell and with the closure of V_<(0).

    Findings, not assertions: mismatches are logged and returned.
    """
    from .analysis import voronoi_region

    origin = tuple([0] * D.dim)
    closed = voronoi_region(D, origin, True)
    opened = voronoi_region(D, origin, False)
    hull = VPolytope(tuple(extreme_points(closed.points())))
    hull_volume = volume(hull)
    eucl = euclidean_voronoi_cell(basis)

    findings = {
        "lattice": basis.name,
        "closed_volume": closed.volume,
        "open_volume": opened.volume,
        "closure_matches": closed.volume == opened.volume,
        "convex": hull_volume == closed.volume,
        "euclidean_vertices": len(eucl),
        "region_vertices": len(hull),
        "matches_euclidean": hull.vertex_set == eucl.vertex_set and hull_volume == closed.volume,
    }
    if basis.name.startswith("A") and D.dim >= 2:
        # Z_2 x Sym(n+1) acts on A_n
        findings["group_order"] = D.group.order
        findings["expected_group_order"] = 2 * factorial(D.dim + 1)
        if D.group.order != findings["expected_group_order"]:
            logger.warning("%s: point group of order %d, Z_2 x Sym(%d) has order %d",
                           basis.name, D.group.order, D.dim + 1, findings["expected_group_order"])
    if not findings["matches_euclidean"]:
        findings["counterexample"] = sorted(hull.vertex_set ^ eucl.vertex_set)
        logger.warning("%s: V_<=(0) differs from the Euclidean Voronoi cell", basis.name)
    if not findings["closure_matches"]:
        logger.warning("%s: closure of V_<(0) differs from V_<=(0)", basis.name)
    return findings
