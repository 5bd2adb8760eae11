import numpy as np
import pytest

from unruh_flux.errors import ParameterError
from unruh_flux.oscillator import ModelParams, fdr_residual, response_kernel, susceptibility


def test_derived_quantities(bench):
    assert bench.gamma == pytest.approx(0.1)
    assert bench.omega == pytest.approx(np.sqrt(4 - 0.01))


def test_rejects_bad_parameters():
    with pytest.raises(ParameterError, match="underdamped"):
        ModelParams(1.0, 0.1, 1.0)  # gamma = 0.25 > omega0
    with pytest.raises(ParameterError, match="nonzero"):
        ModelParams(1.0, 1.0, 0.0)
    with pytest.raises(ParameterError):
        ModelParams(-1.0, 1.0, 0.5)


def test_susceptibility_values():
    p = ModelParams.from_gamma(1.0, 2.0, 0.25)
    assert susceptibility(0.0, p) == 0
    assert susceptibility(2.0, p) == pytest.approx(1 / (2 * 0.25))
    # direct complex division
    assert susceptibility(1.0, p) == pytest.approx(1j / complex(-1 + 4, 2 * 0.25), rel=1e-15)


def test_susceptibility_conjugation(bench):
    w = np.random.default_rng(1).uniform(-30, 30, 200)
    np.testing.assert_allclose(susceptibility(-w, bench), np.conj(susceptibility(w, bench)), atol=1e-14)


def test_fdr_residual():
    p = ModelParams.from_gamma(1.0, 1.0, 0.1)
    assert abs(fdr_residual(1.0, p)) < 1e-15
    assert fdr_residual(0.0, p) == 0
    assert abs(fdr_residual(3.7, p)) < 1e-14


def test_kernel(bench):
    assert response_kernel(0.0, bench) == 0
    assert response_kernel(-1.0, bench) == 0
    assert abs(response_kernel(np.pi / bench.omega, bench)) < 1e-15


def test_kernel_solves_homogeneous_equation(bench):
    t = np.linspace(0.5, 5, 50)
    prev = None
    for h in (1e-2, 5e-3):
        k0, kp, km = (response_kernel(t + s, bench) for s in (0, h, -h))
        res = (kp - 2 * k0 + km) / h**2 + 2 * bench.gamma * (kp - km) / (2 * h) + bench.omega0**2 * k0
        err = np.max(np.abs(res))
        if prev is not None:
            assert prev / err > 3.5  # second order
        prev = err
