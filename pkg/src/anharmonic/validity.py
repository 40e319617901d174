"""Diagnostics for how long the 1/N description tracks the quantum mean.

The validity ratio is ``R = |z1| / (N |z_cl|)``; the breaking-time estimates
below are the analytic scales it is compared against.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .model import ModelParams, NumericalError

# |z_cl| below this is treated as an overdamped tail where R is meaningless
_ZCL_FLOOR = 1e-300


def ratio_from_arrays(z1, z_cl, N: float) -> np.ndarray:
    z1 = np.atleast_1d(np.asarray(z1, dtype=complex))
    z_cl = np.atleast_1d(np.asarray(z_cl, dtype=complex))
    mod = np.abs(z_cl)
    if np.any(mod < _ZCL_FLOOR):
        k = int(np.argmax(mod < _ZCL_FLOOR))
        raise NumericalError(f"|z_cl| underflows at grid index {k}", step=k)
    return np.abs(z1) / (N * mod)


def validity_ratio(traj) -> np.ndarray:
    """``R(tau)`` along a trajectory; zero at ``tau = 0`` since ``z1(0) = 0``."""
    return ratio_from_arrays(traj.z1, traj.z_cl, traj.params.N)


@dataclass(frozen=True)
class ValidityReport:
    """Breaking-time scales. Dissipative entries are ``None`` when Gamma = 0."""

    tau1: float | None
    Q_max_estimate: float | None
    tau_star_hamiltonian: float | None
    tau_star_plateau: float | None
    R_plateau_estimate: float | None
    Omega_l: float

    def to_dict(self) -> dict:
        return asdict(self)


def breaking_report(m: ModelParams, z0: complex) -> ValidityReport:
    l = m.l
    r = abs(z0)
    omega = m.delta_bar + r ** (2 * l)
    if r > 0 and omega != 0:
        tau_ham = math.sqrt(m.N) * math.sqrt(abs(omega)) / (l ** 1.5 * r ** (3 * l - 1))
    else:
        tau_ham = None
    if m.Gamma > 0:
        tau1 = 1.0 / (m.Gamma * l)
        q_max = l / m.Gamma ** 2
        tau_plateau = math.log(m.N) / m.Gamma
        r_plateau = l / (m.N * m.Gamma ** 2)
    else:
        tau1 = q_max = tau_plateau = r_plateau = None
    return ValidityReport(tau1=tau1, Q_max_estimate=q_max,
                          tau_star_hamiltonian=tau_ham,
                          tau_star_plateau=tau_plateau,
                          R_plateau_estimate=r_plateau, Omega_l=omega)


def asymptotic_Q_lossless(m: ModelParams, z0: complex, tau):
    """Leading large-tau term of ``Q`` for the lossless oscillator."""
    l = m.l
    r = abs(z0)
    omega = m.delta_bar + r ** (2 * l)
    tau = np.asarray(tau, dtype=float)
    out = complex(z0) * r ** (2 * (3 * l - 1)) * l ** 3 * tau ** 2 * np.exp(-1j * omega * tau)
    return complex(out) if out.ndim == 0 else out


def asymptotic_shift_lossless(m: ModelParams, z0: complex, tau):
    """Leading large-tau term of ``z1`` for the lossless oscillator."""
    l = m.l
    omega = m.delta_bar + abs(z0) ** (2 * l)
    return asymptotic_Q_lossless(m, z0, tau) / omega


def q_maximum(grid, Q) -> tuple[float, float]:
    """Location and height of the global maximum of ``|Q|``."""
    a = np.abs(Q)
    k = int(np.argmax(a))
    return float(grid[k]), float(a[k])


def saturation_level(grid, values, fraction: float = 0.2) -> float:
    """Mean of ``|values|`` over the last ``fraction`` of the grid."""
    grid = np.asarray(grid)
    cut = grid[0] + (1.0 - fraction) * (grid[-1] - grid[0])
    return float(np.mean(np.abs(np.asarray(values))[grid >= cut]))


def log_slope(grid, R, fraction: float = 0.2) -> float:
    """Least-squares slope of ``ln R`` over the last ``fraction`` of the grid."""
    grid = np.asarray(grid)
    cut = grid[0] + (1.0 - fraction) * (grid[-1] - grid[0])
    sel = grid >= cut
    return float(np.polyfit(grid[sel], np.log(np.asarray(R)[sel]), 1)[0])
