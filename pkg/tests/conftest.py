import numpy as np
import pytest

from garchmcmc import AdaptiveConfig, ParamVector, run_adaptive, simulate

TRUE_PARAMS = ParamVector(alpha=0.03, beta=0.85, omega=0.05, lam=0.1)


@pytest.fixture(scope="session")
def data_small():
    """A short simulated series shared by sampler-level tests."""
    return simulate(TRUE_PARAMS, 400, seed=3)


@pytest.fixture(scope="session")
def small_config():
    return AdaptiveConfig(burn_in=300, initial_pool=200, rebuild_every=250,
                          retained=1500, seed=11)


@pytest.fixture(scope="session")
def small_adaptive(data_small, small_config):
    """One adaptive run on the small series, reused read-only."""
    return run_adaptive(small_config, data_small.y)


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
