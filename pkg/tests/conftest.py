import pytest

from unruh_flux.oscillator import ModelParams


@pytest.fixture(scope="session")
def bench():
    """a = 1, omega0 = 2, gamma = 0.1: the reference parameter set."""
    return ModelParams.from_gamma(1.0, 2.0, 0.1)


@pytest.fixture(scope="session")
def other():
    return ModelParams.from_gamma(0.5, 1.0, 0.3)
