import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from dtcwt_fht.splines import build_system

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def system_512():
    return build_system((8.0, 0.0), 512, 3)


@pytest.fixture(scope="session")
def system_ortho_512():
    return build_system((8.0, 0.0), 512, 3, basis="orthonormal")


def rel_err(a, b):
    return np.linalg.norm(np.asarray(a) - np.asarray(b)) / np.linalg.norm(b)


def direct_dft(x):
    """O(N^2) DFT by explicit summation, used as an independent oracle."""
    x = np.asarray(x, dtype=complex)
    n = x.size
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n) @ x


def direct_idft(spec):
    spec = np.asarray(spec, dtype=complex)
    n = spec.size
    k = np.arange(n)
    return np.exp(2j * np.pi * np.outer(k, k) / n) @ spec / n
