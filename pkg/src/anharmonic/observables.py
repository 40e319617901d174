"""Principal squeezing and Fano factor, exact forms and limiting regimes.

All observables are dimensionless and use the scaled cumulants; ``N`` does
not appear here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .classical import mu
from .model import DegenerateAmplitudeError, ModelParams

REGIMES = ("weak_dissipation", "short_time", "lossless", "asymptotic")

_Z_FLOOR = 1e-12


@dataclass
class ObservableSeries:
    grid: np.ndarray
    S: np.ndarray
    F: np.ndarray
    regime_tags: dict = field(default_factory=dict)


def principal_squeezing(C, B):
    """``S = 2 (B - |C|)``; the state is squeezed when ``S < 1``."""
    S = 2.0 * (np.asarray(B, dtype=float) - np.abs(C))
    return float(S) if S.ndim == 0 else S


def _phi(a):
    # 2a[a - sqrt(1 + a^2)] written without cancellation for large a
    return -2.0 * a / (a + np.sqrt(1.0 + a * a))


def squeezing_closed(m: ModelParams, x0: float, tau):
    """Closed-form squeezing for a real, positive initial amplitude ``x0``."""
    if not x0 > 0:
        raise ValueError("squeezing_closed needs real x0 > 0; use principal_squeezing "
                         "on the cumulants for complex z0")
    tau = np.asarray(tau, dtype=float)
    a = m.l * x0 ** (2 * m.l) * mu(tau, m.Gamma, m.l)
    S = np.exp(-m.Gamma * tau) * (1.0 + _phi(a)) + m.B0 * 2.0 * m.Gamma * tau
    return float(S) if S.ndim == 0 else S


def squeezing_limit(m: ModelParams, x0: float, tau, regime: str):
    """Limiting-regime approximations to the squeezing.

    Returns ``(S, indicator)`` where the indicator is the small or large
    parameter the regime relies on: ``Gamma*tau`` for weak dissipation,
    ``tau`` for short times, ``Gamma`` for the lossless form and ``a`` for
    the asymptotic form.
    """
    tau = np.asarray(tau, dtype=float)
    l, G = m.l, m.Gamma
    p = l * x0 ** (2 * l)
    if regime == "weak_dissipation":
        S = 1.0 + (1.0 - G * tau) * _phi(p * tau) + 2.0 * m.n_d * G * tau
        ind = G * tau
    elif regime == "short_time":
        S = 1.0 - 2.0 * tau * (p - G * m.n_d)
        ind = tau
    elif regime == "lossless":
        S = 1.0 + _phi(p * tau)
        ind = np.full_like(tau, G)
    elif regime == "asymptotic":
        with np.errstate(divide="ignore"):
            S = 1.0 / (p * tau)
        ind = p * tau
    else:
        raise ValueError(f"unknown regime {regime!r}; expected one of {REGIMES}")
    if np.ndim(S) == 0:
        return float(S), float(ind)
    return S, ind


def nonlinear_polarization(m: ModelParams, x0: float) -> float:
    """``g_l x0^(2l)`` in physical frequency units."""
    return m.g_l * x0 ** (2 * m.l)


def critical_phonons(m: ModelParams, x0: float) -> float:
    """Thermal occupation above which the short-time squeezing slope is >= 0.

    Returns ``math.inf`` for a lossless oscillator, which has no threshold.
    """
    if m.Gamma == 0:
        return math.inf
    return m.l * x0 ** (2 * m.l) / m.Gamma


def fano_from_cumulants(z, C, B):
    """``F = 2B + (z*/z) C + c.c.``; undefined where ``|z|`` vanishes."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) < _Z_FLOOR):
        raise DegenerateAmplitudeError("Fano factor needs |z| > 1e-12")
    F = 2.0 * np.asarray(B, dtype=float) + 2.0 * np.real(np.conj(z) / z * np.asarray(C))
    return float(F) if F.ndim == 0 else F


def fano_closed(m: ModelParams, tau):
    """``F = exp(-Gamma tau) + (n_d + 1/2) 2 Gamma tau``; independent of l."""
    tau = np.asarray(tau, dtype=float)
    F = np.exp(-m.Gamma * tau) + m.B0 * 2.0 * m.Gamma * tau
    return float(F) if F.ndim == 0 else F


def observable_series(traj) -> ObservableSeries:
    """S and F along a trajectory, tagged with the route that produced them."""
    S = principal_squeezing(traj.C, traj.B)
    F = fano_from_cumulants(traj.z, traj.C, traj.B)
    return ObservableSeries(grid=traj.grid, S=np.atleast_1d(S), F=np.atleast_1d(F),
                            regime_tags={"S": "exact", "F": "exact"})
