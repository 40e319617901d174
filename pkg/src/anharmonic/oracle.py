"""Exact quantum references in a truncated number basis.

The lossless oscillator is diagonal in the number basis, so coherent-state
amplitudes only pick up phases. The damped oscillator is integrated as a
Lindblad master equation for a thermal reservoir with dense RK4 on the
density matrix. Both report observables in the scaled convention of the
semiclassical engine (``z = <b>/sqrt(N)``; ``C`` and ``B`` are unscaled
fluctuations of ``b``, which equal the scaled cumulants).

The Hamiltonian is taken normally ordered,
``H = Delta b+b + lam/(l+1) b+^(l+1) b^(l+1)``, so
``E_n = Delta n + lam/(l+1) n (n-1) ... (n-l)``. ``ordering="power"`` uses
``lam/(l+1) n^(l+1)`` instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from .model import NumericalError, PhysicalParams, TruncationError

LEAK_TOL = 1e-12
TRACE_TOL = 1e-6


@dataclass(frozen=True)
class OracleObservables:
    t: float
    tau: float
    z: complex
    C: complex
    B: float
    S: float
    F: float
    n_mean: float
    trace: float = 1.0


@dataclass
class FockSystem:
    """Truncated number-basis system: energies plus a pure state or density matrix."""

    n_max: int
    energies: np.ndarray
    state: np.ndarray
    N: float

    @property
    def dim(self) -> int:
        return self.n_max + 1

    @property
    def is_pure(self) -> bool:
        return self.state.ndim == 1

    def populations(self) -> np.ndarray:
        if self.is_pure:
            return np.abs(self.state) ** 2
        return np.real(np.diag(self.state))

    def observables(self, t: float = 0.0, tau: float = 0.0) -> OracleObservables:
        n = np.arange(self.dim)
        P = self.populations()
        if self.is_pure:
            c = self.state
            b1 = np.sum(np.conj(c[:-1]) * c[1:] * np.sqrt(n[1:]))
            b2 = np.sum(np.conj(c[:-2]) * c[2:] * np.sqrt(n[1:-1] * n[2:]))
        else:
            rho = self.state
            # <b^k> = Tr(rho b^k) = sum_n rho[n, n+k] <n+k|...>; rho[n+k, n] conj-pairs
            b1 = np.sum(np.diagonal(rho, offset=-1) * np.sqrt(n[1:]))
            b2 = np.sum(np.diagonal(rho, offset=-2) * np.sqrt(n[1:-1] * n[2:]))
        norm = float(P.sum())
        n1 = np.sum(n * P) / norm
        n2 = np.sum(n * n * P) / norm
        b1 /= norm
        b2 /= norm
        C = b2 - b1 * b1
        B = n1 - abs(b1) ** 2 + 0.5
        return OracleObservables(t=t, tau=tau, z=complex(b1) / math.sqrt(self.N),
                                 C=complex(C), B=float(B), S=float(2.0 * (B - abs(C))),
                                 F=float((n2 - n1 * n1) / n1) if n1 > 0 else float("nan"),
                                 n_mean=float(n1), trace=norm)


def energies(p: PhysicalParams, n_max: int, ordering: str = "normal") -> np.ndarray:
    n = np.arange(n_max + 1, dtype=float)
    if ordering == "normal":
        poly = np.ones_like(n)
        for k in range(p.l + 1):
            poly *= np.maximum(n - k, 0.0)
    elif ordering == "power":
        poly = n ** (p.l + 1)
    else:
        raise ValueError(f"unknown ordering {ordering!r}")
    return p.Delta * n + p.lam / (p.l + 1) * poly


def coherent_amplitudes(beta: complex, n_max: int) -> np.ndarray:
    """Coherent-state amplitudes ``exp(-|b|^2/2) b^n / sqrt(n!)`` built in log space."""
    n = np.arange(n_max + 1)
    r = abs(beta)
    if r == 0:
        c = np.zeros(n_max + 1, dtype=complex)
        c[0] = 1.0
        return c
    logmod = -0.5 * r * r + n * math.log(r) - 0.5 * gammaln(n + 1)
    return np.exp(logmod) * np.exp(1j * n * np.angle(beta))


def tail_probability(mean_n: float, n_max: int) -> float:
    """Poisson probability of occupation above ``n_max``."""
    return float(poisson.sf(n_max, mean_n))


def default_n_max(beta: complex, n_d: float = 0.0) -> int:
    r = abs(beta)
    n_max = math.ceil(r * r + 10 * r + 20 + 10 * n_d)
    while tail_probability(r * r, n_max) > LEAK_TOL:
        n_max *= 2
    return n_max


def _resolve_n_max(beta, n_max, n_d=0.0):
    if n_max is None:
        return default_n_max(beta, n_d)
    leak = tail_probability(abs(beta) ** 2, n_max)
    if leak > LEAK_TOL:
        raise TruncationError(f"n_max={n_max} leaks {leak:.3e} of the initial coherent state")
    return int(n_max)


def _scaled_time(p: PhysicalParams, t: float) -> float:
    return t * p.lam * p.N ** p.l


def fock_evolve_lossless(p: PhysicalParams, beta: complex, t, n_max: int | None = None,
                         ordering: str = "normal"):
    """Exact lossless evolution of the coherent state ``|beta>`` to time(s) ``t``.

    Returns one :class:`OracleObservables` for scalar ``t``, a list otherwise.
    """
    if p.gamma != 0:
        raise ValueError("fock_evolve_lossless requires gamma = 0; use lindblad_evolve")
    n_max = _resolve_n_max(beta, n_max)
    E = energies(p, n_max, ordering)
    c0 = coherent_amplitudes(beta, n_max)
    times = np.atleast_1d(np.asarray(t, dtype=float))
    out = []
    for tk in times:
        sys = FockSystem(n_max=n_max, energies=E, state=c0 * np.exp(-1j * E * tk), N=p.N)
        out.append(sys.observables(t=float(tk), tau=_scaled_time(p, float(tk))))
    return out[0] if np.ndim(t) == 0 else out


def _lindblad_rhs(p: PhysicalParams, E: np.ndarray):
    d = len(E)
    n = np.arange(d, dtype=float)
    k = n + 1.0
    k[-1] = 0.0  # b b+ in the truncated space; keeps the generator trace-preserving
    down = p.gamma * (p.n_d + 1.0)
    up = p.gamma * p.n_d
    diag = (-1j * (E[:, None] - E[None, :])
            - 0.5 * down * (n[:, None] + n[None, :])
            - 0.5 * up * (k[:, None] + k[None, :]))
    s = np.sqrt(np.outer(n[1:], n[1:]))

    def f(t, rho):
        out = diag * rho
        if down:
            out[:-1, :-1] += down * s * rho[1:, 1:]
        if up:
            out[1:, 1:] += up * s * rho[:-1, :-1]
        return out

    return f


def lindblad_evolve(p: PhysicalParams, beta: complex, t_max: float, dt: float,
                    n_max: int | None = None, t_out=None, ordering: str = "normal",
                    edge_tol: float = 1e-8):
    """Integrate the thermal-reservoir master equation from ``|beta><beta|``.

    ``dt`` and ``t_out`` are in physical time; ``t_out`` defaults to every
    step and must lie on the step grid. Returns a list of
    :class:`OracleObservables`. Raises :class:`NumericalError` if the trace
    drifts by more than ``1e-6`` and :class:`TruncationError` if the top
    Fock level ever holds more than ``edge_tol`` population.
    """
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt!r}")
    n_max = _resolve_n_max(beta, n_max, p.n_d)
    E = energies(p, n_max, ordering)
    c0 = coherent_amplitudes(beta, n_max)
    rho = np.outer(c0, np.conj(c0))
    n_steps = int(round(t_max / dt))
    if not math.isclose(n_steps * dt, t_max, rel_tol=1e-9, abs_tol=1e-15):
        raise ValueError(f"dt={dt!r} does not divide t_max={t_max!r}")
    if t_out is None:
        record = set(range(n_steps + 1))
    else:
        record = set()
        for t in np.atleast_1d(t_out):
            k = int(round(t / dt))
            if not math.isclose(k * dt, t, rel_tol=1e-9, abs_tol=1e-12) or k > n_steps:
                raise ValueError(f"output time {t!r} is not on the step grid")
            record.add(k)
    f = _lindblad_rhs(p, E)
    trace0 = np.real(np.trace(rho))
    out = []
    for step in range(n_steps + 1):
        if step > 0:
            t = (step - 1) * dt
            k1 = f(t, rho)
            k2 = f(t + 0.5 * dt, rho + 0.5 * dt * k1)
            k3 = f(t + 0.5 * dt, rho + 0.5 * dt * k2)
            k4 = f(t + dt, rho + dt * k3)
            rho = rho + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            if not np.all(np.isfinite(rho)):
                raise NumericalError(f"non-finite density matrix at step {step}", step=step)
        if step in record:
            tr = np.real(np.trace(rho))
            if abs(tr - trace0) > TRACE_TOL:
                raise NumericalError(f"trace drift {tr - trace0:.3e} at step {step}", step=step)
            edge = float(np.real(rho[-1, -1]))
            if edge > edge_tol:
                raise TruncationError(f"top level population {edge:.3e} at step {step}; raise n_max")
            sys = FockSystem(n_max=n_max, energies=E, state=rho, N=p.N)
            tk = step * dt
            out.append(sys.observables(t=tk, tau=_scaled_time(p, tk)))
    return out

