"""Second-order cumulant dynamics around the classical trajectory.

Two routes are provided and kept separate on purpose:

* closed forms (:func:`cumulants_closed`, :func:`closed_trajectory`) built from
  the differential of the classical flow plus a thermal term linear in tau;
* the full self-consistent system integrated with fixed-step RK4
  (:func:`integrate_semiclassical`), which is the reference for damped runs.

The closed-form thermal term solves the inhomogeneous equations only to first
order in ``Gamma * tau``; the difference to the ODE is measured, not hidden.
"""

from __future__ import annotations

import numpy as np

from .classical import ClassicalDrift, classical_rhs, classical_state, mu
from .model import CumulantState, ModelParams, Trajectory
from .numerics import kernel_trapezoid, n_steps_for, rk4_integrate
from .validity import ratio_from_arrays

KERNELS = ("exact", "bare")
FRAMES = ("rotating", "lab")


def _frame_frequency(m: ModelParams, z0: complex) -> float:
    return m.delta_bar + abs(z0) ** (2 * m.l)


def cumulants_closed(m: ModelParams, z0: complex, tau):
    """Closed-form ``(C, B)`` for coherent initial data ``C(0)=0, B(0)=1/2``."""
    tau = np.asarray(tau, dtype=float)
    l = m.l
    r2 = abs(z0) ** 2
    r2l = r2 ** l
    mu_l = mu(tau, m.Gamma, l)
    a = l * r2l * mu_l
    phase = (-m.Gamma - 2j * m.delta_bar) * tau - 2j * r2l * mu_l
    C = -mu_l * l * complex(z0) ** 2 * r2 ** (l - 1) * (a + 1j) * np.exp(phase)
    B = np.exp(-m.Gamma * tau) * (0.5 + a * a) + m.B0 * m.Gamma * tau
    if np.ndim(C) == 0:
        return complex(C), float(B)
    return C, B


def quantum_correction(m: ModelParams, z, C, B):
    """Quantum correction ``Q`` to the mean-amplitude equation (vectorised).

    ``Q = 1/2 V_zz C + 1/2 V_z*z* C* + V_zz* (B - 1/2)`` for
    ``V = delta_bar z + |z|^(2l) z``.
    """
    l = m.l
    z = np.asarray(z, dtype=complex)
    C = np.asarray(C, dtype=complex)
    B = np.asarray(B, dtype=float)
    zc = np.conj(z)
    q = 0.5 * l * (l + 1) * zc ** l * z ** (l - 1) * C \
        + l * (l + 1) * zc ** (l - 1) * z ** l * (B - 0.5)
    # the C* coefficient l(l-1) vanishes for l = 1; never form zc**(-1)
    if l >= 2:
        q = q + 0.5 * l * (l - 1) * zc ** (l - 2) * z ** (l + 1) * np.conj(C)
    return complex(q) if q.ndim == 0 else q


def _make_rhs(m: ModelParams, include_Q: bool, thermal_source: bool = True,
              omega0: float = 0.0):
    # omega0 != 0 gives the system in a frame rotating at omega0 (z ~ e^{-i omega0 tau});
    # the equations are phase covariant, so the rotated system stays autonomous
    l = m.l
    G = m.Gamma
    dbar = m.delta_bar
    B0 = m.B0 if thermal_source else 0.0
    invN = 1.0 / m.N

    def f(tau, y):
        z = complex(y[0])
        C = complex(y[1])
        B = y[2].real
        zc = z.conjugate()
        r2l = (z * zc).real ** l
        Va = dbar + (l + 1) * r2l
        Vas = l * z ** (l + 1) * zc ** (l - 1)
        dz = -0.5 * G * z - 1j * (dbar + r2l) * z
        if include_Q:
            q = 0.5 * l * (l + 1) * zc ** l * z ** (l - 1) * C \
                + l * (l + 1) * zc ** (l - 1) * z ** l * (B - 0.5)
            if l >= 2:
                q += 0.5 * l * (l - 1) * zc ** (l - 2) * z ** (l + 1) * C.conjugate()
            dz -= 1j * invN * q
        dC = -2j * (Va * C + Vas * B) - G * C
        dB = 2.0 * (Vas * C.conjugate()).imag - G * (B - B0)
        if omega0:
            dz += 1j * omega0 * z
            dC += 2j * omega0 * C
        return np.array([dz, dC, dB])

    return f


def semiclassical_rhs(m: ModelParams, s: CumulantState, include_Q: bool = False):
    """Time derivatives ``(dz, dC, dB)`` of the self-consistent cumulant system."""
    d = _make_rhs(m, include_Q)(s.tau, np.array([s.z, s.C, s.B], dtype=complex))
    return complex(d[0]), complex(d[1]), float(d[2].real)


def shift_from_Q(grid, Q, Gamma: float, kernel: str = "exact") -> np.ndarray:
    """First-order mean shift ``z1`` from ``Q`` sampled on a uniform grid.

    ``kernel="exact"`` solves ``dz1/dtau = -(Gamma/2) z1 - i Q`` exactly,
    i.e. ``-i int exp(-Gamma (tau - s)/2) Q(s) ds``; ``kernel="bare"`` drops
    the damping factor inside the integral, ``-i int Q(s) ds``.
    """
    if kernel not in KERNELS:
        raise ValueError(f"unknown kernel {kernel!r}; expected one of {KERNELS}")
    grid = np.asarray(grid, dtype=float)
    if len(grid) < 2:
        raise ValueError("first-order shift needs at least two grid points")
    kappa = 0.5 * Gamma if kernel == "exact" else 0.0
    return -1j * kernel_trapezoid(Q, grid, kappa)


def first_order_shift(traj: Trajectory, kernel: str | None = None) -> np.ndarray:
    return shift_from_Q(traj.grid, traj.Q, traj.params.Gamma, kernel or traj.kernel)


def _companions(m, z0, grid, z, C, B, kernel):
    z_cl = classical_state(m, z0, grid)
    Q = quantum_correction(m, z, C, B)
    if len(grid) >= 2:
        z1 = shift_from_Q(grid, Q, m.Gamma, kernel)
    else:
        z1 = np.zeros(len(grid), dtype=complex)
    R = ratio_from_arrays(z1, z_cl, m.N)
    return z_cl, np.atleast_1d(Q), z1, R


def integrate_semiclassical(m: ModelParams, z0: complex, tau_max: float,
                            dt: float = 1e-3, include_Q: bool = False,
                            kernel: str = "exact", richardson: bool = True,
                            thermal_source: bool = True,
                            frame: str = "rotating") -> Trajectory:
    """RK4 solution of the cumulant system from coherent data ``(z0, 0, 1/2)``.

    With ``include_Q`` the mean feels the ``Q/N`` correction; without it the
    mean follows the classical flow and the run is the zero-order reference.
    ``richardson`` repeats the run at ``dt/2`` and stores the final-state
    difference divided by 15 as ``error_estimate``. ``thermal_source=False``
    drops the ``Gamma B0`` feed (homogeneous system).

    ``frame="rotating"`` integrates in a frame turning at the initial
    classical frequency ``delta_bar + |z0|^(2l)`` and rotates back on output.
    This is an exact change of variables; it removes the fast carrier that
    otherwise dominates the RK4 truncation error for large ``l``.
    ``frame="lab"`` integrates the equations as written.
    """
    if kernel not in KERNELS:
        raise ValueError(f"unknown kernel {kernel!r}; expected one of {KERNELS}")
    if frame not in FRAMES:
        raise ValueError(f"unknown frame {frame!r}; expected one of {FRAMES}")
    n = n_steps_for(tau_max, dt)
    omega0 = _frame_frequency(m, z0) if frame == "rotating" else 0.0
    f = _make_rhs(m, include_Q, thermal_source, omega0)
    y0 = np.array([z0, 0.0, 0.5], dtype=complex)
    ys = rk4_integrate(f, y0, dt, n)
    error_estimate = None
    if richardson and n > 0:
        fine = rk4_integrate(f, y0, dt / 2, 2 * n)[-1]
        error_estimate = float(np.max(np.abs(fine - ys[-1]))) / 15.0
    grid = np.arange(n + 1) * dt
    rot = np.exp(-1j * omega0 * grid)
    z, C, B = ys[:, 0] * rot, ys[:, 1] * rot * rot, ys[:, 2].real.copy()
    z_cl, Q, z1, R = _companions(m, z0, grid, z, C, B, kernel)
    return Trajectory(params=m, grid=grid, z=z, C=C, B=B, z_cl=z_cl, Q=Q, z1=z1,
                      R=R, z0=complex(z0), include_Q=include_Q, kernel=kernel,
                      error_estimate=error_estimate, meta={"engine": "ode", "dt": dt, "frame": frame})


def closed_trajectory(m: ModelParams, z0: complex, grid, kernel: str = "exact") -> Trajectory:
    """Trajectory assembled from the closed forms on a uniform grid.

    The mean is the classical solution; ``Q`` uses the closed-form cumulants.
    """
    grid = np.asarray(grid, dtype=float)
    z = classical_state(m, z0, grid)
    C, B = cumulants_closed(m, z0, grid)
    z, C, B = np.atleast_1d(z), np.atleast_1d(C), np.atleast_1d(B)
    z_cl, Q, z1, R = _companions(m, z0, grid, z, C, B, kernel)
    return Trajectory(params=m, grid=grid, z=z, C=C, B=B, z_cl=z_cl, Q=Q, z1=z1,
                      R=R, z0=complex(z0), include_Q=False, kernel=kernel,
                      meta={"engine": "closed"})


def linearized_moments(m: ModelParams, z0: complex, tau_max: float,
                       dt: float = 1e-3, h: float = 1e-4):
    """Second moments of the linearised classical flow around ``z_cl``.

    Two tangent vectors (initial ``dz = 1`` and ``dz = i``) are carried along
    with the classical state; the action of the Jacobian is taken by a
    fourth-order central difference of :func:`classical_rhs`, so no derivative of ``V`` is coded
    here. With ``<dz0^2> = 0`` and ``<|dz0|^2> = 1/2`` the moments are
    ``C = p q`` and ``B = (|p|^2 + |q|^2)/2`` where ``dz = p dz0 + q dz0*``.

    Returns ``(grid, C, B)``.
    """
    drift = ClassicalDrift.from_model(m)
    # same rotating frame as integrate_semiclassical; the flow is phase covariant
    w0 = _frame_frequency(m, z0)

    def rhs(z):
        return classical_rhs(drift, z) + 1j * w0 * z

    def jac(z, w):
        # fourth-order central stencil along the unit tangent; the Jacobian
        # action is real-linear, so the length is restored afterwards
        n = abs(w)
        if n == 0:
            return 0j
        u = w / n
        f = lambda s: rhs(z + s * h * u)  # noqa: E731
        return n * (8.0 * (f(1) - f(-1)) - (f(2) - f(-2))) / (12.0 * h)

    def f(tau, y):
        z, u1, u2 = complex(y[0]), complex(y[1]), complex(y[2])
        return np.array([rhs(z), jac(z, u1), jac(z, u2)])

    n = n_steps_for(tau_max, dt)
    ys = rk4_integrate(f, np.array([z0, 1.0, 1j], dtype=complex), dt, n)
    rot = np.exp(-1j * w0 * np.arange(n + 1) * dt)
    u1, u2 = ys[:, 1] * rot, ys[:, 2] * rot
    p = 0.5 * (u1 - 1j * u2)
    q = 0.5 * (u1 + 1j * u2)
    return np.arange(n + 1) * dt, p * q, 0.5 * (np.abs(p) ** 2 + np.abs(q) ** 2)


def linear_reference(Delta: float, gamma: float, n_d: float, z0: complex, t):
    """Exact ``(z, C, B)`` of the damped linear oscillator (no nonlinearity).

    Times and rates are physical; the cumulant system is exact here, so this is
    the semiclassical side of a comparison at zero coupling.
    """
    t = np.asarray(t, dtype=float)
    z = complex(z0) * np.exp((-1j * Delta - 0.5 * gamma) * t)
    decay = np.exp(-gamma * t)
    B = 0.5 * decay + (n_d + 0.5) * (1.0 - decay)
    return z, np.zeros_like(z), B
