"""Zero-order (classical) motion of the damped anharmonic oscillator.

The drift is ``dz/dtau = -i V(z, z*) - (Gamma/2) z`` with
``V = delta_bar z + |z|^(2l) z``, which integrates in closed form because
``|z|`` decays independently of the phase.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams

# below this |Gamma l tau| the Taylor branch of mu is used
_MU_SERIES_CUTOFF = 1e-6


def mu(tau, Gamma: float, l: int):
    """Damped effective time ``[1 - exp(-Gamma l tau)] / (Gamma l)``.

    Equals ``tau`` at ``Gamma = 0``; saturates at ``1/(Gamma l)``.
    Accepts scalars or arrays for ``tau``.
    """
    tau = np.asarray(tau, dtype=float)
    x = Gamma * l * tau
    small = np.abs(x) < _MU_SERIES_CUTOFF
    with np.errstate(divide="ignore", invalid="ignore"):
        exact = -np.expm1(-x) / (Gamma * l)
    series = tau * (1.0 - x / 2.0 + x * x / 6.0)
    out = np.where(small, series, exact)
    return float(out) if out.ndim == 0 else out


def classical_state(m: ModelParams, z0: complex, tau):
    """Exact classical amplitude ``z_cl(tau)`` from ``z(0) = z0``."""
    tau = np.asarray(tau, dtype=float)
    r2l = abs(z0) ** (2 * m.l)
    phase = (-1j * m.delta_bar - 0.5 * m.Gamma) * tau - 1j * r2l * mu(tau, m.Gamma, m.l)
    out = complex(z0) * np.exp(phase)
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ClassicalDrift:
    l: int
    delta_bar: float = 0.0
    Gamma: float = 0.0

    @classmethod
    def from_model(cls, m: ModelParams) -> "ClassicalDrift":
        return cls(l=m.l, delta_bar=m.delta_bar, Gamma=m.Gamma)

    def potential(self, z):
        return self.delta_bar * z + np.abs(z) ** (2 * self.l) * z

    def __call__(self, tau, z):
        return classical_rhs(self, z)


def classical_rhs(d: ClassicalDrift, z):
    return -1j * d.potential(z) - 0.5 * d.Gamma * z
