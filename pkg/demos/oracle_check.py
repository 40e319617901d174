"""
Checking the 1/N expansion against exact quantum dynamics
=========================================================

At modest photon numbers the oscillator can be solved exactly in a truncated
number basis. The semiclassical squeezing should then be off by an amount
that halves when N doubles.
"""

import math

import numpy as np

from anharmonic import (ModelParams, PhysicalParams, fano_from_cumulants,
                        fock_evolve_lossless, integrate_semiclassical, lindblad_evolve,
                        principal_squeezing)

tau = np.linspace(0, 1, 11)
tr = integrate_semiclassical(ModelParams(l=1), 1.0, 1.0, dt=1e-3, richardson=False)
S_sc = principal_squeezing(tr.C[::100], tr.B[::100])

print("lossless Kerr, max |S_semiclassical - S_exact| for tau <= 1")
for N in (50.0, 100.0, 200.0, 400.0):
    # lam = 1/N keeps g_l = 1, so physical and scaled time coincide
    obs = fock_evolve_lossless(PhysicalParams(l=1, lam=1 / N, N=N), math.sqrt(N), tau)
    err = np.max(np.abs(S_sc - [o.S for o in obs]))
    print(f"  N={N:>5.0f}: {err:.4f}   N*err = {N * err:.2f}")

print("damped Kerr (Gamma=0.5, n_d=1), max |F_semiclassical - F_lindblad| for tau <= 2")
m = ModelParams(l=1, Gamma=0.5, n_d=1.0)
tr = integrate_semiclassical(m, 1.0, 2.0, dt=1e-3, richardson=False)
t_out = np.linspace(0, 2, 11)
idx = np.rint(t_out / 1e-3).astype(int)
F_sc = fano_from_cumulants(tr.z[idx], tr.C[idx], tr.B[idx])
for N in (25.0, 50.0):
    p = PhysicalParams(l=1, lam=1 / N, N=N, gamma=0.5, n_d=1.0)
    obs = lindblad_evolve(p, math.sqrt(N), 2.0, 1e-3, t_out=t_out)
    print(f"  N={N:.0f}: {np.max(np.abs(F_sc - [o.F for o in obs])):.4f}")
