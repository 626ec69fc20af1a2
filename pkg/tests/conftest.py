import numpy as np
import pytest

from cpmts.simulation import DGPConfig, generate_cp_series


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def simulate(p, q, d, n, seed, noise=True):
    return generate_cp_series(DGPConfig(p, q, d, n, seed=seed, noise=noise))
