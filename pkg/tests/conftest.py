import numpy as np
import pytest

from valentiner.equivariants import registry as _registry
from valentiner.frames import bub_frame
from valentiner.group import enumerate_group
from valentiner.orbits import special_orbits


@pytest.fixture(scope="session")
def reg():
    return _registry()


@pytest.fixture(scope="session")
def inv(reg):
    return reg.inv


@pytest.fixture(scope="session")
def group_bub():
    return enumerate_group().conjugate_to_frame(bub_frame())


@pytest.fixture(scope="session")
def catalog(group_bub, inv):
    return special_orbits(group_bub, inv)


@pytest.fixture(scope="session")
def selector_general():
    from valentiner.selectors import load_or_fit_selectors

    return load_or_fit_selectors("general")


@pytest.fixture(scope="session")
def selector_special():
    from valentiner.selectors import load_or_fit_selectors

    return load_or_fit_selectors("special")


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
