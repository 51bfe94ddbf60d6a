"""
VN-spaces: the pieces of the tiling of R^n on which the distance to the lattice
is a single affine function alpha(x) = ell0(x - v).

Pipeline
- find_initial: the VN-space containing a generic point, built inside that point's
  AHA cell by clipping with the neighbours in a growing antipodal set S
- find_adjacent: probe just outside a facet, halving the step until the space found
  contains the facet's barycenter
- enumerate: BFS over orbits of VN-spaces under the affine symmetry group
- verify: random-point re-derivation, exact volume identity, face-to-face flags

Probe failures (ties, walls, several closest points) are values, not exceptions;
callers pick another point.
"""

from __future__ import annotations
import heapq
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

from .errors import (
    AdjacencyProbeFailed, InitialPointFailed, NotAdapted, OnWall, VerificationFailed,
)
from .exact import (
    AffineFunctional, IntVector, LinearForm, QVector, centroid, identity, unit_vector, vadd,
    vector, vscale, vsub,
)
from .lattice_enum import closest_lattice_points, integer_points
from . import lp
from .norms import (
    AUTO, GENERIC, SYMMETRIC, ArrangementAHA, CellSignature, PolyhedralNorm,
    adapted_set, build_aha, cell_of_point, dominant_form, norm_value, resolve_strategy,
)
from .polyhedra import (
    Facet, HPolyhedron, VPolytope, describe, dual_description, facets, volume,
)
from .symmetry import (
    AffineSymmetry, PointGroup, equivalent, facet_orbits, inverse, isobarycenter,
    point_group, stabilizer,
)

logger = logging.getLogger("vn_core")


# =============================================================================
# Types
# =============================================================================

@dataclass(frozen=True)
class VNSpace:
    polytope: VPolytope
    v: IntVector
    ell0: LinearForm
    near: Tuple[IntVector, ...] = ()
    cell_sig: Optional[CellSignature] = None

    @property
    def alpha(self) -> AffineFunctional:
        return AffineFunctional(self.ell0, self.v)

    @cached_property
    def facets(self) -> Tuple[Facet, ...]:
        return tuple(facets(self.polytope))

    @cached_property
    def hrep(self) -> HPolyhedron:
        return HPolyhedron(self.polytope.dim, tuple((f.form, f.offset) for f in self.facets))

    @cached_property
    def volume(self) -> Fraction:
        return volume(self.polytope, list(self.facets))

    @property
    def vertices(self) -> Tuple[QVector, ...]:
        return self.polytope.vertices

    def image(self, g: AffineSymmetry) -> "VNSpace":
        """g(V): alpha transforms to ell0 o A^-1 around g(v). Facets are carried over, not recomputed."""
        A_inv = inverse(g.linear)
        moved = VNSpace(
            polytope=g.polytope(self.polytope),
            v=tuple(int(c) for c in g(self.v)),
            ell0=self.ell0.compose(A_inv),
            near=tuple(sorted(tuple(int(c) for c in g(w)) for w in self.near)),
        )
        carried = []
        for f in self.facets:
            # A unimodular keeps (form, offset) a primitive integer ray
            form = f.form.compose(A_inv)
            carried.append(Facet(form, f.offset + form(g.shift), frozenset(g(x) for x in f.vertices)))
        carried.sort(key=lambda f: (f.form.coeffs, f.offset))
        moved.__dict__["facets"] = tuple(carried)
        return moved

    def translate(self, t: Sequence[int]) -> "VNSpace":
        t = tuple(int(c) for c in t)
        return VNSpace(
            polytope=VPolytope(tuple(vadd(p, t) for p in self.polytope.vertices)),
            v=tuple(a + b for a, b in zip(self.v, t)),
            ell0=self.ell0,
            near=tuple(sorted(tuple(a + b for a, b in zip(w, t)) for w in self.near)),
        )


@dataclass(frozen=True)
class ProbeFailure:
    reason: str
    point: QVector

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class Certificate:
    """Why a polytope is not a VN-space."""
    kind: str                                  # "ambiguous witness" | "form violation" | "closer lattice points"
    form: Optional[LinearForm] = None
    point: Optional[QVector] = None
    lattice_points: Tuple[IntVector, ...] = ()

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class OrbitRecord:
    rep: VNSpace
    stabilizer_order: int
    orbit_size: int


@dataclass(frozen=True)
class FacetAdjacency:
    orbit: int
    facet: int
    neighbour: int
    symmetry: AffineSymmetry        # maps the neighbour's representative onto the adjacent space
    face_to_face: bool


@dataclass
class VerificationRecord:
    trials: int
    random_point_failures: List[Dict] = field(default_factory=list)
    volume_sum: Fraction = Fraction(0)
    orbit_volumes: List[Fraction] = field(default_factory=list)
    non_face_to_face: List[Dict] = field(default_factory=list)

    @property
    def volume_ok(self) -> bool:
        return self.volume_sum == 1

    @property
    def face_to_face(self) -> bool:
        return not self.non_face_to_face

    @property
    def ok(self) -> bool:
        return self.volume_ok and self.face_to_face and not self.random_point_failures


@dataclass
class Decomposition:
    norm: PolyhedralNorm
    aha: ArrangementAHA
    group: PointGroup
    orbits: List[OrbitRecord]
    facet_graph: List[FacetAdjacency] = field(default_factory=list)
    strategy: str = AUTO
    seed: int = 0
    checks: Optional[VerificationRecord] = None

    @property
    def dim(self) -> int:
        return self.norm.dim

    @property
    def reps(self) -> List[VNSpace]:
        return [o.rep for o in self.orbits]

    def volume_sum(self) -> Fraction:
        return sum((o.orbit_size * o.rep.volume for o in self.orbits), Fraction(0))


# =============================================================================
# Certification
# =============================================================================

def _harvest(norm: PolyhedralNorm, vertices: Sequence[QVector], v0: IntVector, ell0: LinearForm) -> List[IntVector]:
    """Lattice points v' that could satisfy N(x - v') <= alpha(x) somewhere on conv(vertices)."""
    n = norm.dim
    base = ell0(v0)
    ineqs = []
    for f in norm.forms:
        h = max(ell0(x) - f(x) for x in vertices)
        ineqs.append((-f, h - base))
    return integer_points(HPolyhedron(n, tuple(ineqs)))


def _near(norm: PolyhedralNorm, vertices: Sequence[QVector], alpha: AffineFunctional,
          candidates: Sequence[IntVector]) -> Tuple[IntVector, ...]:
    # N convex, alpha affine and N >= alpha on P: equality at the vertices means equality on P
    out = [w for w in candidates if all(norm.value(vsub(x, w)) == alpha(x) for x in vertices)]
    return tuple(sorted(out))


def is_vn_space(norm: PolyhedralNorm, P: VPolytope) -> Union[bool, Certificate]:
    """True, or a Certificate of failure, for the witness derived from the barycenter."""
    bary = isobarycenter(P)
    _, closest = closest_lattice_points(bary, norm)
    if len(closest) > 1:
        return Certificate("ambiguous witness", point=bary, lattice_points=tuple(closest))
    v0 = closest[0]
    _, top = norm_value(norm, vsub(bary, v0))

    ell0 = None
    for cand in top:
        if all(f(vsub(x, v0)) <= cand(vsub(x, v0)) for x in P.vertices for f in norm.forms):
            ell0 = cand
            break
    if ell0 is None:
        cand = top[0]
        for x in P.vertices:
            for f in norm.forms:
                if f(vsub(x, v0)) > cand(vsub(x, v0)):
                    return Certificate("form violation", form=f, point=x)

    hrep = [(f.form, f.offset) for f in facets(P)]
    A_base = [list(a.coeffs) + [Fraction(0)] for a, _ in hrep]
    b_base = [b for _, b in hrep]
    # minimise t - alpha(x) subject to l(x - v') <= t, x in P
    objective = [-c for c in ell0.coeffs] + [Fraction(1)]
    offenders = []
    for w in _harvest(norm, P.vertices, v0, ell0):
        if w == v0:
            continue
        A = list(A_base)
        b = list(b_base)
        for f in norm.forms:
            A.append(list(f.coeffs) + [Fraction(-1)])
            b.append(f(w))
        res = lp.minimize(objective, A, b)
        if res.optimal and res.value + ell0(v0) < 0:
            offenders.append(w)
    if offenders:
        return Certificate("closer lattice points", lattice_points=tuple(offenders))
    return True


def certify(norm: PolyhedralNorm, P: VPolytope) -> VNSpace:
    """The VNSpace for P, or VerificationFailed carrying the certificate."""
    result = is_vn_space(norm, P)
    if result is not True:
        raise VerificationFailed(f"verification failed: not a VN-space ({result.kind})", witness=result)
    _, closest = closest_lattice_points(isobarycenter(P), norm)
    v0 = closest[0]
    bary = isobarycenter(P)
    _, top = norm_value(norm, vsub(bary, v0))
    ell0 = next(c for c in top
                if all(f(vsub(x, v0)) <= c(vsub(x, v0)) for x in P.vertices for f in norm.forms))
    space = VNSpace(P, v0, ell0)
    return VNSpace(P, v0, ell0, near_of(norm, space))


def near_of(norm: PolyhedralNorm, space: VNSpace) -> Tuple[IntVector, ...]:
    """All v' with N(x - v') = alpha(x) identically on the space."""
    candidates = _harvest(norm, space.vertices, space.v, space.ell0)
    return _near(norm, space.vertices, space.alpha, candidates)


# =============================================================================
# Construction
# =============================================================================

def initial_offsets(n: int) -> Set[IntVector]:
    """{+-e_i} and +-(e_1 + ... + e_n): antipodal and spanning."""
    out: Set[IntVector] = set()
    for i in range(n):
        e = unit_vector(n, i)
        out.add(e)
        out.add(tuple(-c for c in e))
    ones = tuple([1] * n)
    out.add(ones)
    out.add(tuple(-c for c in ones))
    return out


def _ivadd(a: Sequence[int], b: Sequence[int]) -> IntVector:
    return tuple(x + y for x, y in zip(a, b))


def find_initial(norm: PolyhedralNorm, aha: ArrangementAHA, x0: Sequence) -> Union[VNSpace, ProbeFailure]:
    """The VN-space holding x0 in its interior, or a ProbeFailure for degenerate x0."""
    x0 = vector(x0)
    n = norm.dim
    _, closest = closest_lattice_points(x0, norm)
    if len(closest) > 1:
        return ProbeFailure("multiple closest points", x0)
    v0 = closest[0]
    _, top = norm_value(norm, vsub(x0, v0))
    if len(top) > 1:
        return ProbeFailure("tied dominant forms", x0)
    try:
        sig, cell = cell_of_point(aha, x0)
    except OnWall:
        return ProbeFailure("on AHA wall", x0)

    cell_vertices = dual_description(cell).vertices
    ell0 = dominant_form(norm, cell, v0, cell_vertices)
    alpha = AffineFunctional(ell0, v0)
    dominant: Dict[IntVector, LinearForm] = {}

    def form_at(w: IntVector) -> LinearForm:
        if w not in dominant:
            dominant[w] = dominant_form(norm, cell, w, cell_vertices)
        return dominant[w]

    base_rows = list(cell.inequalities)
    for f in norm.forms:
        if f != ell0:
            base_rows.append((f - ell0, f(v0) - ell0(v0)))

    offsets = initial_offsets(n)
    while True:
        rows = list(base_rows)
        for s in sorted(offsets):
            w = _ivadd(v0, s)
            lw = form_at(w)
            # ell0(x - v0) <= lw(x - w)
            rows.append((ell0 - lw, ell0(v0) - lw(w)))
        P, facet_list = describe(HPolyhedron(n, tuple(rows)))
        verts = P.vertices

        candidates = _harvest(norm, verts, v0, ell0)
        violators = []
        for w in candidates:
            s = tuple(a - b for a, b in zip(w, v0))
            if w == v0 or s in offsets:
                continue
            lw = form_at(w)
            if min(lw(vsub(x, w)) - alpha(x) for x in verts) < 0:
                violators.append(s)
        if not violators:
            near = tuple(sorted(
                w for w in candidates
                if all(form_at(w)(vsub(x, w)) == alpha(x) for x in verts)
            ))
            space = VNSpace(P, v0, ell0, near, sig)
            space.__dict__["facets"] = tuple(facet_list)
            logger.debug("initial space at %s: %d vertices, %d offsets", x0, len(verts), len(offsets))
            return space
        grown = set(offsets)
        for a in offsets:
            for b in offsets:
                grown.add(_ivadd(a, b))
        grown.update(violators)
        grown.discard(tuple([0] * n))
        offsets = grown


def random_initial_point(rng: random.Random, norm: PolyhedralNorm, power: Optional[int] = None) -> QVector:
    """Uniform point with denominator 2^power * 3 in [0,1)^n, divided by k until the origin is closest."""
    if power is None:
        from config import RANDOM_DENOMINATOR_POWER
        power = RANDOM_DENOMINATOR_POWER
    den = 2 ** power * 3
    x = tuple(Fraction(rng.randrange(den), den) for _ in range(norm.dim))
    origin = tuple([0] * norm.dim)
    k = 1
    while True:
        y = vscale(Fraction(1, k), x)
        _, closest = closest_lattice_points(y, norm)
        if origin in closest:
            return y
        k += 1


def seed_space(norm: PolyhedralNorm, aha: ArrangementAHA, rng: random.Random, budget: Optional[int] = None) -> VNSpace:
    if budget is None:
        from config import INITIAL_RETRY_BUDGET
        budget = INITIAL_RETRY_BUDGET
    last = None
    for attempt in range(budget):
        x = random_initial_point(rng, norm)
        result = find_initial(norm, aha, x)
        if isinstance(result, VNSpace):
            return result
        last = result
        logger.debug("initial point %s rejected: %s", x, result.reason)
    raise InitialPointFailed(f"initial point failed after {budget} attempts", witness=last)


def _probe_bases(facet: Facet) -> List[QVector]:
    verts = sorted(facet.vertices)
    e = centroid(verts)
    bases = [e]
    k = len(verts)
    for w in verts:
        bases.append(vscale(Fraction(1, k + 1), vadd(vscale(k, e), w)))
    return bases


def find_adjacent(norm: PolyhedralNorm, aha: ArrangementAHA, space: VNSpace, facet: Facet,
                  max_halvings: Optional[int] = None) -> VNSpace:
    """
    The VN-space on the other side of facet, found by stepping along its outward normal.

    Steps start halfway to the nearest other wall and halve up to max_halvings times
    from the facet centroid and from points pulled towards each facet vertex. Norms
    whose AHA walls meet the facet in a way no halved step resolves, such as the
    rectangle {±e1*, ±1/2 e2*}, exhaust every start and raise AdjacencyProbeFailed
    with the facet vertices as witness.
    """
    if max_halvings is None:
        from config import PROBE_MAX_HALVINGS
        max_halvings = PROBE_MAX_HALVINGS
    u = facet.form.coeffs
    for e in _probe_bases(facet):
        slacks = []
        for other in space.facets:
            if other.vertices == facet.vertices:
                continue
            a_u = other.form(u)
            if a_u != 0:
                slacks.append((other.offset - other.form(e)) / abs(a_u))
        lam = min(slacks) / 2 if slacks else Fraction(1, 2)
        for _ in range(max_halvings + 1):
            x = vadd(e, vscale(lam, u))
            result = find_initial(norm, aha, x)
            if isinstance(result, VNSpace) and result.hrep.contains(e):
                return result
            lam /= 2
    raise AdjacencyProbeFailed(
        "adjacency probe failed: no VN-space across the facet", witness=sorted(facet.vertices)
    )


def has_facet(space: VNSpace, vertices) -> bool:
    return any(f.vertices == vertices for f in space.facets)


def enumerate_spaces(norm: PolyhedralNorm, aha: ArrangementAHA, group: PointGroup, seed: int = 0,
                     strategy: str = AUTO) -> Decomposition:
    """All inequivalent VN-spaces by BFS over facet orbits."""
    rng = random.Random(seed)
    first = seed_space(norm, aha, rng)
    reps: List[VNSpace] = [first]
    stab_orders: List[int] = []
    graph: List[FacetAdjacency] = []
    queue: List[Tuple[QVector, int]] = [(isobarycenter(first.polytope), 0)]
    treated: Set[int] = set()
    stab_by_index: Dict[int, int] = {}

    while queue:
        _, idx = heapq.heappop(queue)
        if idx in treated:
            continue
        treated.add(idx)
        rep = reps[idx]
        stab = stabilizer(rep.polytope, group)
        stab_by_index[idx] = len(stab)
        facet_list = list(rep.facets)
        for orbit in facet_orbits(facet_list, stab):
            fi = orbit[0]
            facet = facet_list[fi]
            adj = find_adjacent(norm, aha, rep, facet)
            match = None
            for j, known in enumerate(reps):
                g = equivalent(known.polytope, adj.polytope, group)
                if g is not None:
                    match = (j, g)
                    break
            if match is None:
                reps.append(adj)
                j = len(reps) - 1
                g = AffineSymmetry(identity(norm.dim), tuple([0] * norm.dim))
                heapq.heappush(queue, (isobarycenter(adj.polytope), j))
                logger.info("new orbit %d: %d vertices", j, len(adj.polytope))
                match = (j, g)
            graph.append(FacetAdjacency(idx, fi, match[0], match[1], has_facet(adj, facet.vertices)))

    orbits = []
    for i, rep in enumerate(reps):
        s = stab_by_index[i]
        if group.order % s:
            raise VerificationFailed(f"verification failed: stabilizer order {s} does not divide {group.order}")
        orbits.append(OrbitRecord(rep, s, group.order // s))
    logger.info("enumeration finished: %d orbits", len(orbits))
    return Decomposition(norm, aha, group, orbits, graph, strategy, seed)


def decompose(norm: PolyhedralNorm, strategy: str = AUTO, group: Optional[PointGroup] = None,
              seed: int = 0) -> Decomposition:
    """Adapted set, arrangement, group and enumeration; falls back to generic when symmetric is not adapted."""
    chosen = resolve_strategy(norm, strategy)
    if group is None:
        group = point_group(norm)
    aha = build_aha(adapted_set(norm, chosen))
    try:
        return enumerate_spaces(norm, aha, group, seed, chosen)
    except NotAdapted:
        if chosen != SYMMETRIC:
            raise
        logger.warning("symmetric adapted set failed its dominance certificate; retrying with generic")
        aha = build_aha(adapted_set(norm, GENERIC))
        return enumerate_spaces(norm, aha, group, seed, GENERIC)


# =============================================================================
# Verification
# =============================================================================

def interior_sample(P: VPolytope, rng: random.Random, power: Optional[int] = None) -> QVector:
    """Convex combination of all vertices with positive rational weights."""
    if power is None:
        from config import RANDOM_DENOMINATOR_POWER
        power = RANDOM_DENOMINATOR_POWER
    weights = [rng.randint(1, 2 ** power) for _ in P.vertices]
    total = sum(weights)
    n = P.dim
    return tuple(
        sum((Fraction(w) * v[i] for w, v in zip(weights, P.vertices)), Fraction(0)) / total
        for i in range(n)
    )


def verify(D: Decomposition, trials: int, seed: int = 0) -> VerificationRecord:
    from config import INITIAL_RETRY_BUDGET
    rng = random.Random(seed)
    record = VerificationRecord(trials=trials)

    for i, orbit in enumerate(D.orbits):
        rep = orbit.rep
        for _ in range(trials):
            found = None
            x = None
            for _attempt in range(INITIAL_RETRY_BUDGET):
                x = interior_sample(rep.polytope, rng)
                found = find_initial(D.norm, D.aha, x)
                if isinstance(found, VNSpace):
                    break
            if not isinstance(found, VNSpace) or found.polytope != rep.polytope:
                record.random_point_failures.append({"orbit": i, "point": x})

    record.orbit_volumes = [o.rep.volume for o in D.orbits]
    record.volume_sum = sum((o.orbit_size * vol for o, vol in zip(D.orbits, record.orbit_volumes)), Fraction(0))
    for edge in D.facet_graph:
        if not edge.face_to_face:
            record.non_face_to_face.append({"orbit": edge.orbit, "facet": edge.facet, "neighbour": edge.neighbour})

    if record.ok:
        logger.info("checks passed: volume sum %s, %d trials per orbit", record.volume_sum, trials)
    else:
        logger.warning("checks failed: volume sum %s, %d random-point failures, %d non face-to-face facets",
                       record.volume_sum, len(record.random_point_failures), len(record.non_face_to_face))
    D.checks = record
    return record
