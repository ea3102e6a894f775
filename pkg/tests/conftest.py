import numpy as np
import pytest

from zenoquench import SystemParams, run_free_decay

# Reference parameter sets used throughout: the resonant array (emitter at
# the band center) and the detuned one (emitter 0.10 GHz below the band).
RESONANT = dict(omega0_ghz=8.74, omegac_ghz=8.74, hop_ghz=0.05, g0_ghz=0.05, n_sites=61)
DETUNED = dict(omega0_ghz=8.54, omegac_ghz=8.74, hop_ghz=0.05, g0_ghz=0.05, n_sites=61)


@pytest.fixture(scope="session")
def resonant_params() -> SystemParams:
    return SystemParams(**RESONANT)


@pytest.fixture(scope="session")
def detuned_params() -> SystemParams:
    return SystemParams(**DETUNED)


@pytest.fixture(scope="session")
def resonant_free_70(resonant_params):
    """The long resonant decay run, shared by several tests."""
    return run_free_decay(resonant_params, 70.0, 0.01)


def random_state(n_sites: int, seed: int) -> np.ndarray:
    """Normalized random complex amplitude vector of dimension n_sites + 1."""
    rng = np.random.default_rng(seed)
    v = rng.normal(size=n_sites + 1) + 1j * rng.normal(size=n_sites + 1)
    return v / np.linalg.norm(v)
