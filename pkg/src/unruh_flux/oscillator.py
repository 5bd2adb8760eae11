"""Damped oscillator detector: parameters, susceptibility, retarded kernel."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class ModelParams:
    a: float
    omega0: float
    coupling: float

    def __post_init__(self):
        for name in ("a", "omega0", "coupling"):
            val = getattr(self, name)
            if not math.isfinite(val):
                raise ParameterError(f"{name} must be finite, got {val!r}")
        if self.a <= 0:
            raise ParameterError("acceleration a must be positive")
        if self.omega0 <= 0:
            raise ParameterError("omega0 must be positive")
        if self.coupling == 0:
            raise ParameterError("coupling must be nonzero")
        if self.gamma >= self.omega0:
            raise ParameterError(
                f"underdamped regime required (gamma={self.gamma:g} >= omega0={self.omega0:g})"
            )

    @classmethod
    def from_gamma(cls, a: float, omega0: float, gamma: float) -> "ModelParams":
        """Build parameters from the damping rate instead of the coupling."""
        if not gamma > 0:
            raise ParameterError("coupling must be nonzero")
        return cls(a=a, omega0=omega0, coupling=2.0 * math.sqrt(gamma))

    @property
    def gamma(self) -> float:
        return self.coupling**2 / 4.0

    @property
    def omega(self) -> float:
        return math.sqrt(self.omega0**2 - self.gamma**2)


def susceptibility(omega, params: ModelParams):
    """chi(w) = i w / (w0^2 - w^2 + 2 i w gamma); accepts scalars or arrays."""
    w = np.asarray(omega, dtype=float)
    chi = 1j * w / (params.omega0**2 - w * w + 2j * w * params.gamma)
    return complex(chi) if chi.ndim == 0 else chi


def fdr_residual(omega, params: ModelParams):
    """(chi + chi*) - 4 gamma |chi|^2, which vanishes identically for real w."""
    chi = np.asarray(susceptibility(omega, params))
    res = 2.0 * chi.real - 4.0 * params.gamma * (chi.real**2 + chi.imag**2)
    return float(res) if res.ndim == 0 else res


def response_kernel(tau, params: ModelParams):
    """Retarded Green function of the oscillator, zero for negative lag."""
    t = np.asarray(tau, dtype=float)
    om = params.omega
    k = np.where(t > 0, np.sin(om * t) * np.exp(-params.gamma * np.maximum(t, 0.0)) / om, 0.0)
    return float(k) if k.ndim == 0 else k
