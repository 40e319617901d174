"""Deterministic fixed-step kernels: RK4 and kernel-weighted cumulative trapezoid."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .model import NumericalError

RHS = Callable[[float, np.ndarray], np.ndarray]


def rk4_step(f: RHS, y: np.ndarray, tau: float, dt: float) -> np.ndarray:
    """One classical fourth-order Runge-Kutta step of ``y' = f(tau, y)``."""
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt!r}")
    k1 = f(tau, y)
    k2 = f(tau + 0.5 * dt, y + 0.5 * dt * k1)
    k3 = f(tau + 0.5 * dt, y + 0.5 * dt * k2)
    k4 = f(tau + dt, y + dt * k3)
    return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def n_steps_for(tau_max: float, dt: float) -> int:
    """Number of uniform steps covering ``[0, tau_max]``; ``dt`` must divide it."""
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt!r}")
    if not tau_max >= 0:
        raise ValueError(f"tau_max must be >= 0, got {tau_max!r}")
    n = int(round(tau_max / dt))
    if not math.isclose(n * dt, tau_max, rel_tol=1e-9, abs_tol=1e-12):
        raise ValueError(f"dt={dt!r} does not divide tau_max={tau_max!r}")
    return n


def rk4_integrate(f: RHS, y0, dt: float, n_steps: int, tau0: float = 0.0) -> np.ndarray:
    """Integrate ``n_steps`` RK4 steps; returns an ``(n_steps + 1, len(y0))`` array.

    Raises :class:`NumericalError` carrying the index of the first step that
    produced a non-finite state.
    """
    y = np.asarray(y0, dtype=complex)
    out = np.empty((n_steps + 1,) + y.shape, dtype=complex)
    out[0] = y
    for k in range(n_steps):
        y = rk4_step(f, y, tau0 + k * dt, dt)
        if not np.all(np.isfinite(y)):
            raise NumericalError(f"non-finite state at step {k + 1}", step=k + 1)
        out[k + 1] = y
    return out


def is_uniform(grid: np.ndarray, rtol: float = 1e-9) -> bool:
    d = np.diff(grid)
    return bool(len(d) > 0 and np.all(d > 0)
                and np.allclose(d, d[0], rtol=rtol, atol=rtol * abs(d[0])))


def kernel_trapezoid(values, grid, kappa: float = 0.0) -> np.ndarray:
    """Cumulative ``I(t_k) = int_0^{t_k} exp(-kappa (t_k - s)) values(s) ds``.

    Composite trapezoid on a uniform grid, evaluated with the recurrence
    ``I[k+1] = e I[k] + dt/2 (e v[k] + v[k+1])`` where ``e = exp(-kappa dt)``.
    """
    values = np.asarray(values, dtype=complex)
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2:
        raise ValueError("grid needs at least two points")
    if values.shape != grid.shape:
        raise ValueError("values and grid must have the same length")
    if kappa < 0:
        raise ValueError(f"kappa must be >= 0, got {kappa!r}")
    if not is_uniform(grid):
        raise ValueError("kernel_trapezoid requires a uniform grid")
    dt = (grid[-1] - grid[0]) / (len(grid) - 1)
    decay = math.exp(-kappa * dt)
    out = np.empty_like(values)
    out[0] = 0.0
    acc = 0j
    for k in range(len(grid) - 1):
        acc = decay * acc + 0.5 * dt * (decay * values[k] + values[k + 1])
        out[k + 1] = acc
    return out
