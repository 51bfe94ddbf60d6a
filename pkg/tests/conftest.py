from fractions import Fraction as F

import pytest

from modules.norms import l1_forms, linf_forms, validate_norm
from modules.vn_core import decompose, verify


def _decomposed(forms, trials=4):
    D = decompose(validate_norm(forms), seed=0)
    verify(D, trials, seed=0)
    return D


@pytest.fixture(scope="session")
def linf2():
    return validate_norm(linf_forms(2))


@pytest.fixture(scope="session")
def l1_2():
    return validate_norm(l1_forms(2))


@pytest.fixture(scope="session")
def z1():
    return _decomposed(linf_forms(1))


@pytest.fixture(scope="session")
def z2_linf():
    return _decomposed(linf_forms(2))


@pytest.fixture(scope="session")
def z2_l1():
    return _decomposed(l1_forms(2))


@pytest.fixture(scope="session")
def z3_linf():
    return _decomposed(linf_forms(3), trials=2)


@pytest.fixture(scope="session")
def z3_l1():
    return _decomposed(l1_forms(3), trials=2)


@pytest.fixture
def triangle():
    """VN-space of (3/8, 1/8) under L-infinity on Z^2."""
    return ((0, 0), (F(1, 2), F(1, 2)), (F(1, 2), F(-1, 2)))
