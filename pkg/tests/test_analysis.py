import random
from dataclasses import replace
from fractions import Fraction as F
from itertools import product

import pytest

from modules.analysis import (
    covering_radius, d_points, expand_pieces, incident_spaces, non_degenerate,
    star_convexity_check, voronoi_region, voronoi_vertices,
)
from modules.errors import NonFaceToFace
from modules.lattice_enum import d_min
from modules.polyhedra import (
    BOUNDED_FULL_DIM, HPolyhedron, VPolytope, classify, dual_description, to_hpolyhedron, volume,
)

H = F(1, 2)
CORNERS = [(-H, -H), (-H, H), (H, -H), (H, H)]


def test_covering_radius_linf(z2_linf):
    value, witness = covering_radius(z2_linf)
    assert value == H
    assert d_min(witness, z2_linf.norm) == H


def test_covering_radius_l1(z2_l1):
    value, witness = covering_radius(z2_l1)
    assert value == 1
    assert tuple(abs(c) for c in witness) == (H, H)


def test_covering_radius_z1(z1):
    value, witness = covering_radius(z1)
    assert value == H
    assert abs(witness[0]) == H


@pytest.mark.slow
def test_covering_radius_z3(z3_l1):
    value, witness = covering_radius(z3_l1)
    assert value == F(3, 2)
    assert tuple(abs(c) for c in witness) == (H, H, H)


def test_covering_radius_bounds_d_min(z2_linf, z2_l1):
    rng = random.Random(4)
    for D in (z2_linf, z2_l1):
        cov, _ = covering_radius(D)
        for _ in range(40):
            x = tuple(F(rng.randint(-60, 60), 17) for _ in range(2))
            assert d_min(x, D.norm) <= cov


@pytest.mark.parametrize("name", ["z2_linf", "z2_l1"])
def test_voronoi_region_is_the_square(name, request):
    D = request.getfixturevalue(name)
    region = voronoi_region(D, (0, 0))
    assert len(region.pieces) == 4
    assert region.volume == 1
    assert region.extreme_points() == sorted(CORNERS)
    assert all(p.space.near == ((0, 0),) for p in region.pieces)


def test_voronoi_region_z1(z1):
    region = voronoi_region(z1, (0,))
    assert region.volume == 1
    assert region.extreme_points() == [(-H,), (H,)]


def test_voronoi_region_translation_equivariance(z2_linf):
    base = voronoi_region(z2_linf, (0, 0))
    moved = voronoi_region(z2_linf, (3, -1))
    shifted = sorted(tuple((x + 3, y - 1) for x, y in p.space.vertices) for p in base.pieces)
    assert sorted(p.space.vertices for p in moved.pieces) == sorted(VPolytope(s).vertices for s in shifted)


def test_non_degenerate(z2_linf, z2_l1):
    assert non_degenerate(z2_linf)
    assert non_degenerate(z2_l1)
    closed = voronoi_region(z2_l1, (0, 0), closed=True)
    opened = voronoi_region(z2_l1, (0, 0), closed=False)
    assert opened.volume == closed.volume


def test_star_convexity(z2_linf, z2_l1):
    assert star_convexity_check(z2_linf, 30, random.Random(0)) == []
    assert star_convexity_check(z2_l1, 30, random.Random(1)) == []


def test_incident_spaces(z2_linf, z2_l1):
    assert len(incident_spaces(z2_linf, (H, H))) == 8
    assert len(incident_spaces(z2_l1, (H, H))) == 4
    inside = incident_spaces(z2_linf, (F(3, 8), F(1, 8)))
    assert len(inside) == 1
    assert inside[0].space.v == (0, 0)


def test_d_points(z2_linf, z2_l1, z1):
    assert d_points(z2_linf).dimension == 1
    l1 = d_points(z2_l1)
    assert l1.dimension == 0
    assert all(len(P.vertices) == 1 and tuple(abs(c) for c in P.vertices[0]) == (H, H) for P in l1.pieces)
    assert d_points(z1).dimension == 0


def test_d_points_are_local_maxima(z2_linf):
    rng = random.Random(2)
    for P in d_points(z2_linf).pieces:
        for x in P.vertices:
            here = d_min(x, z2_linf.norm)
            for _ in range(10):
                t = F(1, 64)
                u = (F(rng.randint(-8, 8), 8), F(rng.randint(-8, 8), 8))
                assert d_min((x[0] + t * u[0], x[1] + t * u[1]), z2_linf.norm) <= here


def test_d_points_need_face_to_face(z2_linf):
    graph = [replace(z2_linf.facet_graph[0], face_to_face=False)] + z2_linf.facet_graph[1:]
    with pytest.raises(NonFaceToFace):
        d_points(replace(z2_linf, facet_graph=graph))


def test_voronoi_vertices(z2_linf, z2_l1, z1):
    assert voronoi_vertices(z2_linf, (0, 0)) == sorted(CORNERS)
    assert voronoi_vertices(z2_l1, (0, 0)) == sorted(CORNERS)
    assert voronoi_vertices(z1, (0,)) == [(-H,), (H,)]


def test_expand_pieces_window(z2_l1):
    rep = z2_l1.reps[0]
    pieces = expand_pieces(z2_l1, [(0, rep.polytope)], (-1, -1), (1, 1))
    # 4x4 half-unit squares cover [-1, 1]^2; neighbours touching the window are kept too
    assert len(pieces) >= 16
    assert len({p.vertex_set for p in pieces}) == len(pieces)


@pytest.mark.slow
def test_voronoi_region_z3_linf_is_the_cube(z3_linf):
    region = voronoi_region(z3_linf, (0, 0, 0))
    assert region.volume == 1
    assert region.extreme_points() == sorted(product((-H, H), repeat=3))
    assert voronoi_vertices(z3_linf, (0, 0, 0)) == sorted(product((-H, H), repeat=3))


def test_incident_spaces_are_memoised(z2_linf):
    first = incident_spaces(z2_linf, (H, 0))
    again = incident_spaces(z2_linf, (H, F(0)))
    assert [p.space.polytope for p in first] == [p.space.polytope for p in again]
    assert first is not again
    assert all(p.space.hrep.contains((H, 0)) for p in first)
    assert {p.space.v for p in first} == {(0, 0), (1, 0)}


def test_incident_spaces_agree_with_images(z2_l1):
    x = (F(1, 4), F(-1, 2))
    for piece in incident_spaces(z2_l1, x):
        assert piece.space.polytope == piece.symmetry.polytope(z2_l1.reps[piece.orbit].polytope)
        assert piece.space.hrep.contains(x)


@pytest.mark.parametrize("name", ["z2_linf", "z2_l1"])
def test_images_tile_the_unit_box(name, request):
    D = request.getfixturevalue(name)
    box = HPolyhedron.box((0, 0), (1, 1))
    total = F(0)
    for P in expand_pieces(D, [(i, rep.polytope) for i, rep in enumerate(D.reps)], (0, 0), (1, 1)):
        clipped = to_hpolyhedron(P).intersect(box)
        if classify(clipped).kind == BOUNDED_FULL_DIM:
            total += volume(dual_description(clipped))
    assert total == 1
