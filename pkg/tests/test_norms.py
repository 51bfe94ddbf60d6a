import random
from fractions import Fraction as F

import pytest

from modules.errors import (
    DegenerateNorm, DimensionMismatch, IncompatibleStrategy, NotAdapted, NotPositiveDefinite, OnWall,
)
from modules.exact import LinearForm
from modules.norms import (
    GENERIC, L1_SPECIAL, LINF_SPECIAL, SYMMETRIC, adapted_set, build_aha, canonical_key,
    cell_of_point, cell_polyhedron, dominant_form, l1_forms, linf_forms, norm_value,
    resolve_strategy, signature, validate_norm,
)
from modules.polyhedra import HPolyhedron, dual_description

H = F(1, 2)


def keys(forms):
    return {canonical_key(f) for f in forms}


def test_validate_standard_norms():
    linf = validate_norm(linf_forms(2))
    assert linf.symmetric and not linf.simplicial
    l1 = validate_norm(l1_forms(2))
    assert l1.symmetric
    assert len(l1.forms) == 4


def test_validate_drops_redundant_forms():
    norm = validate_norm(linf_forms(2) + [LinearForm.of(H, H), LinearForm.of(0, 0)])
    assert set(norm.forms) == set(linf_forms(2))


def test_simplicial_norm():
    norm = validate_norm([(1, 0), (0, 1), (-1, -1)])
    assert norm.simplicial
    assert not norm.symmetric
    assert norm((-1, -1)) == 2


def test_not_positive_definite():
    with pytest.raises(NotPositiveDefinite) as exc:
        validate_norm([(1,)])
    x = exc.value.witness
    assert x[0] < 0


def test_degenerate_norm():
    with pytest.raises(DegenerateNorm):
        validate_norm([(1, 0), (-1, 0)])
    with pytest.raises(DegenerateNorm):
        validate_norm([])


def test_mixed_dimensions():
    with pytest.raises(DimensionMismatch):
        validate_norm([(1, 0), (1,)])


def test_norm_value(linf2, l1_2):
    assert norm_value(linf2, (3, -4)) == (4, [LinearForm.of(0, -1)])
    assert norm_value(l1_2, (3, -4)) == (7, [LinearForm.of(1, -1)])
    value, top = norm_value(linf2, (1, 1))
    assert value == 1
    assert set(top) == {LinearForm.of(1, 0), LinearForm.of(0, 1)}


def test_resolve_strategy(linf2, l1_2):
    assert resolve_strategy(l1_2) == L1_SPECIAL
    assert resolve_strategy(linf2) == LINF_SPECIAL
    assert resolve_strategy(validate_norm([(2, 0), (-2, 0), (0, 2), (0, -2)])) == LINF_SPECIAL
    assert resolve_strategy(validate_norm([(1, 1), (-1, -1), (1, 0), (-1, 0)])) == SYMMETRIC
    assert resolve_strategy(validate_norm([(1, 0), (0, 1), (-1, -1)])) == GENERIC


def test_adapted_sets(linf2, l1_2):
    assert keys(adapted_set(l1_2, L1_SPECIAL)) == {(1, 0), (0, 1)}
    assert keys(adapted_set(linf2, LINF_SPECIAL)) == {(1, 1), (1, -1)}
    assert keys(adapted_set(linf2, GENERIC)) == {(1, 0), (0, 1), (1, 1), (1, -1)}
    assert keys(adapted_set(linf2, SYMMETRIC)) == {(1, 1), (1, -1)}


def test_special_sets_accept_scaled_norms():
    scaled = validate_norm([f.scaled(3) for f in l1_forms(3)])
    assert keys(adapted_set(scaled, L1_SPECIAL)) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}


def test_incompatible_strategies(linf2):
    with pytest.raises(IncompatibleStrategy):
        adapted_set(linf2, L1_SPECIAL)
    with pytest.raises(IncompatibleStrategy):
        adapted_set(validate_norm(linf_forms(1)), LINF_SPECIAL)
    with pytest.raises(IncompatibleStrategy):
        adapted_set(validate_norm([(1, 0), (0, 1), (-1, -1)]), SYMMETRIC)


def test_build_aha():
    aha = build_aha([LinearForm.of(1, 0), LinearForm.of(0, 1)])
    assert [c.step for c in aha.classes] == [1, 1]
    aha = build_aha([LinearForm.of(1, 1), LinearForm.of(1, -1), LinearForm.of(-1, -1)])
    assert len(aha) == 2
    aha = build_aha([LinearForm.of(F(2, 3), F(4, 3))])
    assert aha.classes[0].step == F(2, 3)
    c = aha.classes[0]
    assert c.form(c.witness) == c.step


def test_cells():
    l1_aha = build_aha([LinearForm.of(1, 0), LinearForm.of(0, 1)])
    _, cell = cell_of_point(l1_aha, (F(3, 10), F(2, 5)))
    assert dual_description(cell).vertex_set == {(0, 0), (1, 0), (0, 1), (1, 1)}

    linf_aha = build_aha([LinearForm.of(1, 1), LinearForm.of(1, -1)])
    sig = signature(linf_aha, (F(3, 8), F(1, 8)))
    assert sig.indices == (0, 0)
    assert dual_description(cell_polyhedron(linf_aha, sig)).vertex_set == {(0, 0), (H, H), (H, -H), (1, 0)}


def test_on_wall():
    linf_aha = build_aha([LinearForm.of(1, 1), LinearForm.of(1, -1)])
    with pytest.raises(OnWall) as exc:
        signature(linf_aha, (H, H))
    assert exc.value.class_index == 0


def test_dominant_form(linf2, l1_2):
    unit = HPolyhedron.box((0, 0), (1, 1))
    assert dominant_form(l1_2, unit, (0, 0)) == LinearForm.of(1, 1)
    assert dominant_form(l1_2, unit, (1, 0)) == LinearForm.of(-1, 1)
    diamond = HPolyhedron(2, (
        (LinearForm.of(1, 1), 1), (LinearForm.of(-1, -1), 0),
        (LinearForm.of(1, -1), 1), (LinearForm.of(-1, 1), 0),
    ))
    assert dominant_form(linf2, diamond, (0, 0)) == LinearForm.of(1, 0)


def test_dominant_form_not_adapted(linf2):
    # x - y changes sign on the unit square
    with pytest.raises(NotAdapted):
        dominant_form(linf2, HPolyhedron.box((0, 0), (1, 1)), (0, 0))


HEXAGONAL = [(1, 0), (0, 1), (-1, -1), (-1, 0), (0, -1), (1, 1)]
SIMPLICIAL = [(1, 0), (0, 1), (-1, -1)]


def random_point(rng, n=2):
    return tuple(F(rng.randint(-30, 30), rng.randint(1, 9)) for _ in range(n))


@pytest.mark.parametrize("forms", [l1_forms(2), linf_forms(2), l1_forms(3), HEXAGONAL, SIMPLICIAL],
                         ids=["l1", "linf", "l1-3d", "hexagonal", "simplicial"])
def test_norm_axioms(forms):
    norm = validate_norm(forms)
    rng = random.Random(len(forms))
    for _ in range(40):
        x, y = random_point(rng, norm.dim), random_point(rng, norm.dim)
        q = F(rng.randint(1, 20), rng.randint(1, 7))
        assert norm(tuple(a + b for a, b in zip(x, y))) <= norm(x) + norm(y)
        assert norm(tuple(q * a for a in x)) == q * norm(x)
        assert norm(x) >= 0
        if norm.symmetric:
            assert norm(tuple(-a for a in x)) == norm(x)
