"""Parameter types, unit scaling and the value types shared by all modules.

Physical parameters are in frequency units; the dynamics runs in scaled units
where time is ``tau = g_l t`` with ``g_l = lambda * N**l``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np


class NumericalError(RuntimeError):
    """Non-finite state or similar numerical breakdown.

    ``step`` is the index of the first offending integration step, if known.
    """

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class TruncationError(NumericalError):
    """Fock-space truncation leaks more probability than allowed."""


class DegenerateAmplitudeError(ValueError):
    """Mean amplitude too close to zero for a phase-dependent quantity."""


def _check_finite(**values: float) -> None:
    for name, v in values.items():
        if not math.isfinite(v):
            raise ValueError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class PhysicalParams:
    """Oscillator and reservoir parameters in physical (frequency) units.

    ``lam`` is the anharmonic coupling lambda_l (``lambda`` is a Python keyword).
    ``lam = 0`` is accepted so the exact oracles can run the linear oscillator;
    it has no scaled counterpart and :func:`scale_parameters` rejects it.
    """

    l: int
    lam: float
    N: float
    Delta: float = 0.0
    gamma: float = 0.0
    n_d: float = 0.0

    def __post_init__(self):
        _check_finite(lam=self.lam, N=self.N, Delta=self.Delta,
                      gamma=self.gamma, n_d=self.n_d)
        if int(self.l) != self.l or self.l < 1:
            raise ValueError(f"l must be a positive integer, got {self.l!r}")
        if self.lam < 0:
            raise ValueError(f"lam must be >= 0, got {self.lam!r}")
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N!r}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma!r}")
        if self.n_d < 0:
            raise ValueError(f"n_d must be >= 0, got {self.n_d!r}")


@dataclass(frozen=True)
class ModelParams:
    """Scaled model parameters.

    Gamma and delta_bar are the damping and detuning divided by ``g_l``;
    ``g_l`` itself is kept only to convert back to physical time.
    """

    l: int
    Gamma: float = 0.0
    delta_bar: float = 0.0
    n_d: float = 0.0
    N: float = 1.0
    g_l: float = 1.0

    def __post_init__(self):
        _check_finite(Gamma=self.Gamma, delta_bar=self.delta_bar,
                      n_d=self.n_d, N=self.N, g_l=self.g_l)
        if int(self.l) != self.l or self.l < 1:
            raise ValueError(f"l must be a positive integer, got {self.l!r}")
        if self.Gamma < 0:
            raise ValueError(f"Gamma must be >= 0, got {self.Gamma!r}")
        if self.n_d < 0:
            raise ValueError(f"n_d must be >= 0, got {self.n_d!r}")
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N!r}")
        if self.g_l <= 0:
            raise ValueError(f"g_l must be > 0, got {self.g_l!r}")

    @property
    def B0(self) -> float:
        """Equilibrium symmetric-order fluctuation, thermal occupation plus 1/2."""
        return self.n_d + 0.5

    def to_physical(self) -> PhysicalParams:
        lam = self.g_l / self.N ** self.l
        return PhysicalParams(l=self.l, lam=lam, N=self.N,
                              Delta=self.delta_bar * self.g_l,
                              gamma=self.Gamma * self.g_l, n_d=self.n_d)


def scale_parameters(p: PhysicalParams) -> ModelParams:
    """Convert physical parameters to the scaled model (``g_l = lam * N**l``)."""
    if not p.lam > 0:
        raise ValueError(f"scaling needs lam > 0, got {p.lam!r}")
    g_l = p.lam * p.N ** p.l
    return ModelParams(l=p.l, Gamma=p.gamma / g_l, delta_bar=p.Delta / g_l,
                       n_d=p.n_d, N=p.N, g_l=g_l)


def physical_time(tau: float, m: ModelParams) -> float:
    _check_finite(tau=tau)
    return tau / m.g_l


def scaled_time(t: float, m: ModelParams) -> float:
    _check_finite(t=t)
    return t * m.g_l


@dataclass(frozen=True)
class CumulantState:
    """Mean amplitude ``z`` and second-order cumulants at scaled time ``tau``.

    ``C`` is the squared fluctuation and ``B`` the symmetric-order occupation
    fluctuation (normal-order value plus 1/2).
    """

    tau: float
    z: complex
    C: complex
    B: float

    @classmethod
    def coherent(cls, z0: complex, tau: float = 0.0) -> "CumulantState":
        return cls(tau=tau, z=complex(z0), C=0j, B=0.5)


@dataclass
class Trajectory:
    """Cumulant trajectory on a uniform scaled-time grid plus companions.

    The state is stored column-wise (``z``, ``C``, ``B`` arrays); ``states``
    yields the per-point :class:`CumulantState` view.
    """

    params: ModelParams
    grid: np.ndarray
    z: np.ndarray
    C: np.ndarray
    B: np.ndarray
    z_cl: np.ndarray
    Q: np.ndarray
    z1: np.ndarray
    R: np.ndarray
    z0: complex = 1.0
    include_Q: bool = False
    kernel: str = "exact"
    error_estimate: float | None = None
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.grid)

    def state(self, k: int) -> CumulantState:
        return CumulantState(tau=float(self.grid[k]), z=complex(self.z[k]),
                             C=complex(self.C[k]), B=float(self.B[k]))

    @property
    def states(self) -> Iterator[CumulantState]:
        return (self.state(k) for k in range(len(self.grid)))

    @property
    def final(self) -> CumulantState:
        return self.state(len(self.grid) - 1)
