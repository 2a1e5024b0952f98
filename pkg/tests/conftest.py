import numpy as np
import pytest

from eqfaddeev import ModelParams, build_cutoffs, make_grid


@pytest.fixture(scope="session")
def grid512():
    return make_grid(ModelParams(n1=1, r_max=16.0, n_cells=512))


@pytest.fixture(scope="session")
def cut512(grid512):
    return build_cutoffs(1, grid512)


@pytest.fixture(scope="session")
def cut512_n0(grid512):
    return build_cutoffs(0, grid512)


@pytest.fixture(scope="session")
def grid256():
    return make_grid(ModelParams(n1=1, r_max=16.0, n_cells=256))


@pytest.fixture(scope="session")
def cut256(grid256):
    return build_cutoffs(1, grid256)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
