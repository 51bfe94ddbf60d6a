import random
from fractions import Fraction as F
from itertools import product

import pytest

from modules.errors import UnboundedPolyhedron
from modules.exact import LinearForm, vsub
from modules.lattice_enum import ball_polytope, closest_lattice_points, d_min, integer_points
from modules.norms import l1_forms, validate_norm
from modules.polyhedra import HPolyhedron


def test_integer_points_box():
    pts = integer_points(HPolyhedron.box((0, 0), (2, 2)))
    assert len(pts) == 9
    assert pts == sorted(pts)


def test_integer_points_simplex():
    H = HPolyhedron(2, ((LinearForm.of(1, 1), 1), (LinearForm.of(-1, 0), 0), (LinearForm.of(0, -1), 0)))
    assert integer_points(H) == [(0, 0), (0, 1), (1, 0)]


def test_integer_points_thin_polytope():
    # 1/3 <= x <= 2/3 has no integer point
    assert integer_points(HPolyhedron.box((F(1, 3), 0), (F(2, 3), 5))) == []


def test_integer_points_unbounded():
    with pytest.raises(UnboundedPolyhedron):
        integer_points(HPolyhedron(2, ((LinearForm.of(-1, 0), 0), (LinearForm.of(0, -1), 0))))


def test_ball_polytope(linf2):
    ball = ball_polytope((F(3, 10), F(2, 5)), linf2, F(2, 5))
    assert integer_points(ball) == [(0, 0)]


def test_closest_lattice_points(linf2):
    assert closest_lattice_points((F(3, 10), F(2, 5)), linf2) == (F(2, 5), [(0, 0)])
    assert closest_lattice_points((F(1, 2), 0), linf2) == (F(1, 2), [(0, 0), (1, 0)])
    assert closest_lattice_points((3, -7), linf2) == (0, [(3, -7)])


def test_d_min_deep_holes(linf2, l1_2):
    assert d_min((F(1, 2), F(1, 2)), l1_2) == 1
    assert d_min((F(1, 2), F(1, 2)), linf2) == F(1, 2)
    assert d_min((0, 0), l1_2) == 0


def test_closest_agrees_with_scan(l1_2):
    rng = random.Random(7)
    for _ in range(30):
        x = tuple(F(rng.randint(-40, 40), 12) for _ in range(2))
        d, winners = closest_lattice_points(x, l1_2)
        scan = {v: l1_2.value(vsub(x, v)) for v in product(range(-5, 6), repeat=2)}
        best = min(scan.values())
        assert d == best
        assert winners == sorted(v for v, val in scan.items() if val == best)


def scan_d_min(x, norm, radius=4):
    n = len(x)
    return min(norm.value(vsub(x, v)) for v in product(range(-radius, radius + 1), repeat=n))


def test_d_min_is_translation_invariant(linf2, l1_2):
    rng = random.Random(3)
    for norm in (linf2, l1_2):
        for _ in range(20):
            x = tuple(F(rng.randint(-24, 24), 11) for _ in range(2))
            v = (rng.randint(-9, 9), rng.randint(-9, 9))
            assert d_min(tuple(a + b for a, b in zip(x, v)), norm) == d_min(x, norm)


def test_d_min_asymmetric_norm():
    norm = validate_norm([(1, 0), (0, 1), (-1, -1)])
    rng = random.Random(8)
    for _ in range(25):
        x = tuple(F(rng.randint(-18, 18), 7) for _ in range(2))
        assert d_min(x, norm) == scan_d_min(x, norm)


def test_d_min_three_dimensions():
    norm = validate_norm(l1_forms(3))
    rng = random.Random(10)
    for _ in range(15):
        x = tuple(F(rng.randint(-12, 12), 5) for _ in range(3))
        assert d_min(x, norm) == scan_d_min(x, norm, radius=3)
    assert d_min((F(1, 2), F(1, 2), F(1, 2)), norm) == F(3, 2)
