import random
from dataclasses import replace
from fractions import Fraction as F

import pytest

from modules.errors import AdjacencyProbeFailed, InitialPointFailed
from modules.exact import LinearForm
from modules.lattice_enum import closest_lattice_points
from modules.norms import GENERIC, LINF_SPECIAL, adapted_set, build_aha, signature, validate_norm
from modules.polyhedra import VPolytope, describe, facets
from modules.symmetry import AffineSymmetry, isobarycenter, point_group
from modules.vn_core import (
    Decomposition, OrbitRecord, ProbeFailure, VNSpace, certify, decompose, find_adjacent,
    find_initial, interior_sample, is_vn_space, near_of, random_initial_point, seed_space, verify,
)

H = F(1, 2)
SQUARE = VPolytope(((0, 0), (H, 0), (0, H), (H, H)))


@pytest.fixture(scope="module")
def linf_aha(linf2):
    return build_aha(adapted_set(linf2))


@pytest.fixture(scope="module")
def l1_aha(l1_2):
    return build_aha(adapted_set(l1_2))


def facet_through(space, *points):
    return next(f for f in space.facets if set(points) <= f.vertices)


# ---------- certification ----------

def test_is_vn_space_triangle(linf2, triangle):
    assert is_vn_space(linf2, VPolytope(triangle)) is True
    space = certify(linf2, VPolytope(triangle))
    assert space.v == (0, 0)
    assert space.ell0 == LinearForm.of(1, 0)
    assert space.near == ((0, 0),)


def test_is_vn_space_half_square(l1_2):
    assert is_vn_space(l1_2, SQUARE) is True
    space = certify(l1_2, SQUARE)
    assert space.ell0 == LinearForm.of(1, 1)
    assert space.near == ((0, 0),)


def test_unit_square_is_not_a_vn_space(l1_2):
    cert = is_vn_space(l1_2, VPolytope(((0, 0), (1, 0), (0, 1), (1, 1))))
    assert not cert
    assert cert.kind == "ambiguous witness"
    assert len(cert.lattice_points) == 4


def test_closer_lattice_point_certificate(l1_2):
    P = VPolytope(((0, 0), (F(3, 4), 0), (0, F(1, 4)), (F(3, 4), F(1, 4))))
    cert = is_vn_space(l1_2, P)
    assert not cert
    assert cert.kind == "closer lattice points"
    assert (1, 0) in cert.lattice_points


def test_near_degenerate_equidistance():
    norm = validate_norm([(1, 0), (-1, 0), (0, H), (0, -H)])
    P = VPolytope(((F(3, 8), F(1, 4)), (H, F(1, 4)), (F(3, 8), F(3, 4)), (H, F(3, 4))))
    space = VNSpace(P, (0, 0), LinearForm.of(1, 0))
    assert near_of(norm, space) == ((0, 0), (0, 1))


# ---------- construction ----------

def test_find_initial_linf(linf2, linf_aha, triangle):
    space = find_initial(linf2, linf_aha, (F(3, 8), F(1, 8)))
    assert isinstance(space, VNSpace)
    assert space.polytope == VPolytope(triangle)
    assert space.v == (0, 0)
    assert space.ell0 == LinearForm.of(1, 0)
    assert space.volume == F(1, 4)


def test_find_initial_l1(l1_2, l1_aha):
    space = find_initial(l1_2, l1_aha, (F(3, 10), F(1, 5)))
    assert space.polytope == SQUARE
    assert space.near == ((0, 0),)


@pytest.mark.parametrize("x0,reason", [
    ((H, F(1, 4)), "multiple closest points"),
    ((0, 0), "tied dominant forms"),
    ((F(1, 4), F(1, 4)), "tied dominant forms"),
])
def test_find_initial_failures(linf2, linf_aha, x0, reason):
    result = find_initial(linf2, linf_aha, x0)
    assert isinstance(result, ProbeFailure)
    assert not result
    assert result.reason == reason


def test_find_initial_on_wall(linf2):
    generic = build_aha(adapted_set(linf2, GENERIC))
    result = find_initial(linf2, generic, (0, F(3, 8)))
    assert isinstance(result, ProbeFailure)
    assert result.reason == "on AHA wall"


def test_find_adjacent_linf(linf2, linf_aha, triangle):
    space = find_initial(linf2, linf_aha, (F(3, 8), F(1, 8)))
    across = find_adjacent(linf2, linf_aha, space, facet_through(space, (H, H), (H, -H)))
    assert across.polytope == VPolytope(((1, 0), (H, H), (H, -H)))
    assert across.v == (1, 0)
    assert across.near == ((1, 0),)
    rotated = find_adjacent(linf2, linf_aha, space, facet_through(space, (0, 0), (H, H)))
    assert rotated.polytope == VPolytope(((0, 0), (H, H), (-H, H)))
    assert rotated.ell0 == LinearForm.of(0, 1)


def test_find_adjacent_l1(l1_2, l1_aha):
    space = find_initial(l1_2, l1_aha, (F(3, 10), F(1, 5)))
    across = find_adjacent(l1_2, l1_aha, space, facet_through(space, (H, 0), (H, H)))
    assert across.polytope == VPolytope(((H, 0), (1, 0), (H, H), (1, H)))
    assert across.v == (1, 0)
    assert across.ell0 == LinearForm.of(-1, 1)


def test_random_initial_point_prefers_origin(linf2):
    rng = random.Random(3)
    for _ in range(10):
        x = random_initial_point(rng, linf2)
        assert (0, 0) in closest_lattice_points(x, linf2)[1]


def test_seed_space_budget(linf2, linf_aha):
    with pytest.raises(InitialPointFailed):
        seed_space(linf2, linf_aha, random.Random(0), budget=0)


def test_interior_sample(triangle):
    P = VPolytope(triangle)
    rng = random.Random(5)
    space = VNSpace(P, (0, 0), LinearForm.of(1, 0))
    for _ in range(10):
        assert space.hrep.interior(interior_sample(P, rng))


# ---------- enumeration ----------

def test_z1(z1):
    assert len(z1.orbits) == 1
    orbit = z1.orbits[0]
    assert orbit.rep.volume == H
    assert orbit.orbit_size == 2
    assert z1.volume_sum() == 1
    assert z1.checks.ok


def test_z2_linf(z2_linf):
    assert z2_linf.strategy == LINF_SPECIAL
    assert z2_linf.group.order == 8
    assert len(z2_linf.orbits) == 1
    orbit = z2_linf.orbits[0]
    assert len(orbit.rep.vertices) == 3
    assert orbit.rep.volume == F(1, 4)
    assert (orbit.stabilizer_order, orbit.orbit_size) == (2, 4)
    assert z2_linf.checks.ok
    assert z2_linf.checks.volume_sum == 1


def test_z2_l1(z2_l1):
    assert len(z2_l1.orbits) == 1
    orbit = z2_l1.orbits[0]
    assert len(orbit.rep.vertices) == 4
    assert orbit.rep.volume == F(1, 4)
    assert orbit.orbit_size == 4
    assert z2_l1.checks.ok


@pytest.mark.slow
def test_z3_l1(z3_l1):
    assert z3_l1.group.order == 48
    assert len(z3_l1.orbits) == 1
    orbit = z3_l1.orbits[0]
    assert len(orbit.rep.vertices) == 8
    assert orbit.rep.volume == F(1, 8)
    assert (orbit.stabilizer_order, orbit.orbit_size) == (6, 8)
    assert z3_l1.volume_sum() == 1


def test_reps_are_certified_and_inside_one_cell(z2_linf, z2_l1):
    for D in (z2_linf, z2_l1):
        for rep in D.reps:
            assert is_vn_space(D.norm, rep.polytope) is True
            sig = signature(D.aha, isobarycenter(rep.polytope))
            for c, k in zip(D.aha.classes, sig.indices):
                values = [c.form(x) for x in rep.vertices]
                assert k * c.step <= min(values) and max(values) <= (k + 1) * c.step


def test_facet_graph_is_face_to_face(z2_linf):
    assert z2_linf.facet_graph
    assert all(edge.face_to_face for edge in z2_linf.facet_graph)
    for edge in z2_linf.facet_graph:
        assert 0 <= edge.neighbour < len(z2_linf.orbits)


def test_decompose_is_deterministic(linf2):
    a = decompose(linf2, seed=11)
    b = decompose(linf2, seed=11)
    assert [r.polytope for r in a.reps] == [r.polytope for r in b.reps]


def test_decompose_generic_strategy(linf2):
    D = decompose(linf2, "generic", seed=1)
    assert D.strategy == "generic"
    assert D.volume_sum() == 1


def test_decompose_with_supplied_group(l1_2):
    group = point_group(l1_2)
    D = decompose(l1_2, group=group, seed=2)
    assert D.group is group
    assert D.volume_sum() == 1


# ---------- verification ----------

def test_verify_without_trials(z2_linf):
    record = verify(replace(z2_linf, checks=None), 0)
    assert record.trials == 0
    assert record.volume_ok and record.face_to_face


def test_verify_corrupted_volume(z2_linf):
    small = VPolytope(((0, 0), (H, 0), (H, H)))
    rep = VNSpace(small, (0, 0), LinearForm.of(1, 0), ((0, 0),))
    corrupted = Decomposition(z2_linf.norm, z2_linf.aha, z2_linf.group, [OrbitRecord(rep, 2, 4)])
    record = verify(corrupted, 0)
    assert record.volume_sum == H
    assert not record.ok


def test_verify_flags_non_face_to_face(z2_linf):
    graph = [replace(z2_linf.facet_graph[0], face_to_face=False)] + z2_linf.facet_graph[1:]
    broken = replace(z2_linf, facet_graph=graph, checks=None)
    record = verify(broken, 0)
    assert not record.face_to_face
    assert record.non_face_to_face[0]["orbit"] == graph[0].orbit


def test_image_and_translate(triangle):
    space = VNSpace(VPolytope(triangle), (0, 0), LinearForm.of(1, 0), ((0, 0),))
    moved = space.translate((2, 1))
    assert moved.v == (2, 1)
    assert (2, 1) in moved.polytope.vertex_set
    g = AffineSymmetry(((0, -1), (1, 0)), (0, 0))
    rotated = space.image(g)
    assert rotated.ell0 == LinearForm.of(0, 1)
    assert rotated.polytope == VPolytope(((0, 0), (H, H), (-H, H)))
    x = (F(1, 10), F(1, 3))
    assert rotated.alpha(x) == space.alpha((x[1], -x[0]))


def test_image_carries_the_recomputed_facets(linf2, triangle):
    space = VNSpace(VPolytope(triangle), (0, 0), LinearForm.of(1, 0), ((0, 0),))
    for A in point_group(linf2).elements:
        moved = space.image(AffineSymmetry(A, (1, -2)))
        assert moved.facets == tuple(facets(moved.polytope))
        assert moved.volume == space.volume


@pytest.mark.parametrize("name", ["linf2", "l1_2"])
def test_verify_hundred_trials(name, request):
    D = decompose(request.getfixturevalue(name), seed=0)
    record = verify(D, 100, seed=0)
    assert record.trials == 100
    assert record.ok
    assert record.volume_sum == 1


def test_every_generated_space_describes_itself(z2_linf, z2_l1, z1):
    for D in (z2_linf, z2_l1, z1):
        for orbit in D.orbits:
            polytope, walls = describe(orbit.rep.hrep)
            assert polytope == orbit.rep.polytope
            assert set(walls) == set(orbit.rep.facets)


def test_rectangle_norm_cannot_cross_a_wall():
    norm = validate_norm([(1, 0), (-1, 0), (0, H), (0, -H)])
    with pytest.raises(AdjacencyProbeFailed) as info:
        decompose(norm, seed=0)
    assert info.value.witness
