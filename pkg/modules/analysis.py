"""
Geometry read off a verified decomposition.

Every quantity here is assembled from orbit representatives moved around by the
affine symmetry group: covering radius, Voronoi regions V_<= / V_<, D-points and
Voronoi vertices.
"""

from __future__ import annotations
import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import NonFaceToFace
from .exact import IntVector, QVector, affine_rank, centroid, mat_vec, rank, to_int_vector, vector, vsub
from .lattice_enum import closest_lattice_points
from .polyhedra import VPolytope, extreme_points
from .symmetry import AffineSymmetry, inverse
from .vn_core import Decomposition, VNSpace, interior_sample

logger = logging.getLogger("analysis")


@dataclass(frozen=True)
class RegionPiece:
    space: VNSpace
    orbit: int
    symmetry: AffineSymmetry


@dataclass
class VoronoiRegion:
    center: IntVector
    pieces: List[RegionPiece]
    closed: bool

    @property
    def volume(self) -> Fraction:
        return sum((p.space.volume for p in self.pieces), Fraction(0))

    def points(self) -> List[QVector]:
        return sorted({x for p in self.pieces for x in p.space.vertices})

    def extreme_points(self) -> List[QVector]:
        return sorted(extreme_points(self.points()))


@dataclass
class DPointSet:
    pieces: List[VPolytope]
    dimension: int
    orbits: List[int] = field(default_factory=list)


# =============================================================================
# Covering radius
# =============================================================================

def covering_radius(D: Decomposition) -> Tuple[Fraction, QVector]:
    """max alpha over the vertices of the representatives, with the lex-largest attaining vertex."""
    best = None
    witness = None
    for rep in D.reps:
        alpha = rep.alpha
        for x in rep.vertices:
            a = alpha(x)
            if best is None or a > best or (a == best and x > witness):
                best, witness = a, x
    return best, witness


# =============================================================================
# Incidence
# =============================================================================

def _translations_towards(vertices: Sequence[QVector], lo: Sequence, hi: Sequence) -> List[IntVector]:
    n = len(lo)
    ranges = []
    for i in range(n):
        cmin = min(v[i] for v in vertices)
        cmax = max(v[i] for v in vertices)
        ranges.append(range(ceil(Fraction(lo[i]) - cmax), floor(Fraction(hi[i]) - cmin) + 1))
    return list(itertools.product(*ranges))


class _Incidence:
    """
    Point location among all images g(P) + t of the representatives.

    x lies in A P + t iff A^-1 x - s lies in P with s = A^-1 t, so every query
    moves x back once per group element and tests it against the vertex boxes
    of the representatives. Answers are memoised per point.
    """

    def __init__(self, D: Decomposition):
        n = D.dim
        self.D = D
        self.maps = [(A, inverse(A)) for A in D.group.elements]
        self.boxes = [
            (tuple(min(p[k] for p in rep.vertices) for k in range(n)),
             tuple(max(p[k] for p in rep.vertices) for k in range(n)))
            for rep in D.reps
        ]
        self.memo: Dict[QVector, List[RegionPiece]] = {}

    def __call__(self, x: QVector) -> List[RegionPiece]:
        if x in self.memo:
            return self.memo[x]
        pulled = [(A, mat_vec(A_inv, x)) for A, A_inv in self.maps]
        out: List[RegionPiece] = []
        seen = set()
        for i, rep in enumerate(self.D.reps):
            lo, hi = self.boxes[i]
            for A, y in pulled:
                ranges = [range(ceil(y[k] - hi[k]), floor(y[k] - lo[k]) + 1) for k in range(len(y))]
                for s in itertools.product(*ranges):
                    if not rep.hrep.contains(vsub(y, s)):
                        continue
                    g = AffineSymmetry(A, to_int_vector(mat_vec(A, s)))
                    key = frozenset(g(p) for p in rep.vertices)
                    if key in seen:
                        continue
                    seen.add(key)
                    out.append(RegionPiece(rep.image(g), i, g))
        self.memo[x] = out
        return out


def _incidence(D: Decomposition) -> _Incidence:
    index = D.__dict__.get("_incidence")
    if index is None:
        index = _Incidence(D)
        D.__dict__["_incidence"] = index
    return index


def incident_spaces(D: Decomposition, x: Sequence) -> List[RegionPiece]:
    """All VN-space images whose closure contains x."""
    return list(_incidence(D)(vector(x)))


def expand_pieces(D: Decomposition, pieces: Sequence[Tuple[int, VPolytope]], lo: Sequence, hi: Sequence) -> List[VPolytope]:
    """Images of (orbit, polytope) pieces under the symmetry group meeting the box [lo, hi]."""
    out = []
    seen = set()
    for _, P in pieces:
        for A in D.group.elements:
            moved = [mat_vec(A, p) for p in P.vertices]
            for t in _translations_towards(moved, lo, hi):
                Q = VPolytope(tuple(tuple(c + s for c, s in zip(p, t)) for p in moved))
                if Q.vertex_set in seen:
                    continue
                # keep only images with a vertex box overlapping the window
                if all(min(p[k] for p in Q.vertices) <= hi[k] and max(p[k] for p in Q.vertices) >= lo[k]
                       for k in range(len(lo))):
                    seen.add(Q.vertex_set)
                    out.append(Q)
    return sorted(out, key=lambda q: q.vertices)


# =============================================================================
# Voronoi regions
# =============================================================================

def voronoi_region(D: Decomposition, v: Sequence[int], closed: bool = True) -> VoronoiRegion:
    """
    V_<=(v) (closed) or V_<(v) (open) as VN-space images.

    Each image g(P) with g(u) = v for some u in Near(P) has v in its Near set,
    so the pieces are exactly the translates t = v - A u.
    """
    v = tuple(int(c) for c in v)
    pieces: List[RegionPiece] = []
    seen = set()
    for i, orbit in enumerate(D.orbits):
        rep = orbit.rep
        if not closed and len(rep.near) != 1:
            continue
        for A in D.group.elements:
            for u in rep.near:
                t = tuple(a - b for a, b in zip(v, mat_vec(A, u)))
                g = AffineSymmetry(A, to_int_vector(t))
                key = frozenset(g(p) for p in rep.vertices)
                if key in seen:
                    continue
                seen.add(key)
                pieces.append(RegionPiece(rep.image(g), i, g))
    pieces.sort(key=lambda p: p.space.polytope.vertices)
    return VoronoiRegion(v, pieces, closed)


def non_degenerate(D: Decomposition) -> bool:
    """V_<=(0) is the closure of V_<(0), compared through exact volumes."""
    origin = tuple([0] * D.dim)
    return voronoi_region(D, origin, True).volume == voronoi_region(D, origin, False).volume


def star_convexity_check(D: Decomposition, samples: int, rng: random.Random) -> List[Tuple[QVector, Fraction]]:
    """(x, lambda) pairs where the origin stops being a closest point of lambda x for x in V_<=(0)."""
    origin = tuple([0] * D.dim)
    region = voronoi_region(D, origin, True)
    failures = []
    for _ in range(samples):
        piece = rng.choice(region.pieces)
        x = interior_sample(piece.space.polytope, rng)
        lam = Fraction(rng.randint(1, 95), 96)
        y = tuple(lam * c for c in x)
        d, closest = closest_lattice_points(y, D.norm)
        if origin not in closest:
            failures.append((x, lam))
    if failures:
        logger.warning("star convexity failed at %d of %d samples", len(failures), samples)
    return failures


# =============================================================================
# D-points and Voronoi vertices
# =============================================================================

def _require_face_to_face(D: Decomposition) -> None:
    if not all(edge.face_to_face for edge in D.facet_graph):
        raise NonFaceToFace("non face-to-face: decomposition has facets without a matching neighbour")


def _alpha_max(space: VNSpace) -> Fraction:
    alpha = space.alpha
    return max(alpha(x) for x in space.vertices)


def d_points(D: Decomposition) -> DPointSet:
    """Per representative, the hull of vertices maximising alpha in every incident VN-space."""
    _require_face_to_face(D)
    pieces: List[VPolytope] = []
    orbits: List[int] = []
    for i, rep in enumerate(D.reps):
        top = _alpha_max(rep)
        chosen = []
        for x in rep.vertices:
            if rep.alpha(x) != top:
                continue
            if all(p.space.alpha(x) == _alpha_max(p.space) for p in incident_spaces(D, x)):
                chosen.append(x)
        if chosen:
            pieces.append(VPolytope(tuple(extreme_points(chosen))))
            orbits.append(i)
    dimension = max((affine_rank(list(P.vertices)) for P in pieces), default=-1)
    logger.info("D-points: %d pieces, dimension %d", len(pieces), dimension)
    return DPointSet(pieces, dimension, orbits)


def _neighbour(D: Decomposition, piece: RegionPiece, facet) -> Optional[RegionPiece]:
    e = centroid(sorted(facet.vertices))
    own = piece.space.polytope.vertex_set
    for other in incident_spaces(D, e):
        if other.space.polytope.vertex_set != own:
            return other
    return None


def voronoi_vertices(D: Decomposition, v: Sequence[int]) -> List[QVector]:
    """Vertices of V_<(v): points whose incident REAL walls have normals of full rank."""
    _require_face_to_face(D)
    n = D.dim
    region = voronoi_region(D, v, closed=False)
    in_region = {p.space.polytope.vertex_set for p in region.pieces}
    normals: Dict[QVector, List[QVector]] = {}
    for piece in region.pieces:
        for facet in piece.space.facets:
            other = _neighbour(D, piece, facet)
            real = other is None or set(other.space.near) != set(piece.space.near)
            boundary = other is None or other.space.polytope.vertex_set not in in_region
            if real != boundary:
                logger.warning("wall %s: REAL-wall reading disagrees with the region-boundary reading",
                               sorted(facet.vertices))
            if not real:
                continue
            for x in facet.vertices:
                normals.setdefault(x, []).append(facet.form.coeffs)
    return sorted(x for x, ns in normals.items() if rank(ns) == n)
