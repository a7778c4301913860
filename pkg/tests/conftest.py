"""Pytest configuration and fixtures."""

import pytest

from entrolab.models.group import (
    DirectSumFamily,
    FinitaryUTFamily,
    FiniteFamily,
    PolyHeisenbergFamily,
)
from entrolab.services.config import Settings
from entrolab.services.tables import builtin, cyclic
from entrolab.utils.output import set_json_mode


@pytest.fixture(autouse=True)
def reset_json_mode():
    """Every test starts in console mode."""
    set_json_mode(False)
    yield
    set_json_mode(False)


@pytest.fixture
def settings():
    """Settings with a small sample count for sampled checks."""
    return Settings(homomorphism_samples=200, n_max=6)


@pytest.fixture
def ut3():
    """UT3(F2), the dihedral group of order 8."""
    return builtin("ut3_f2")


@pytest.fixture
def ut4():
    return builtin("ut4_f2")


@pytest.fixture
def finite_ut3(ut3):
    return FiniteFamily(ut3)


@pytest.fixture
def ds_z2():
    return DirectSumFamily(cyclic(2))


@pytest.fixture
def ds_ut3(ut3):
    return DirectSumFamily(ut3)


@pytest.fixture
def heis():
    return PolyHeisenbergFamily(2)


@pytest.fixture
def finitary():
    return FinitaryUTFamily(2)
