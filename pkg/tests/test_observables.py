import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from anharmonic import (DegenerateAmplitudeError, ModelParams, critical_phonons,
                        closed_trajectory, cumulants_closed, fano_closed, fano_from_cumulants,
                        integrate_semiclassical, nonlinear_polarization, observable_series,
                        principal_squeezing, squeezing_closed, squeezing_limit)

S1 = 3 - 2 * math.sqrt(2)


def test_principal_squeezing_examples():
    assert principal_squeezing(0j, 0.5) == 1
    assert principal_squeezing(-(1 + 1j) * cmath.exp(-2j), 1.5) == pytest.approx(S1, abs=1e-14)
    assert principal_squeezing(0j, 1.5) == 3


def test_squeezing_closed_examples():
    assert squeezing_closed(ModelParams(l=3, Gamma=0.2, n_d=1), 0.7, 0.0) == 1
    assert squeezing_closed(ModelParams(l=1), 1.0, 1.0) == pytest.approx(S1, abs=1e-15)
    S = squeezing_closed(ModelParams(l=1, Gamma=0.5, n_d=1), 1.0, 2.0)
    assert S == pytest.approx(3.0445, abs=1e-4)


def test_squeezing_closed_rejects_non_positive_amplitude():
    with pytest.raises(ValueError):
        squeezing_closed(ModelParams(l=1), 0.0, 1.0)


def test_squeezing_limit_examples():
    S, ind = squeezing_limit(ModelParams(l=1, Gamma=0.05), 1.0, 0.01, "short_time")
    assert S == pytest.approx(0.98, abs=1e-14) and ind == 0.01
    S, _ = squeezing_limit(ModelParams(l=1), 1.0, 100.0, "asymptotic")
    assert S == pytest.approx(0.01)
    S, _ = squeezing_limit(ModelParams(l=1), 1.0, 1.0, "lossless")
    assert S == pytest.approx(S1, abs=1e-15)
    with pytest.raises(ValueError):
        squeezing_limit(ModelParams(l=1), 1.0, 1.0, "moderate")


def test_weak_dissipation_limit_converges_linearly_in_gamma():
    tau = np.linspace(0, 5, 51)
    err = []
    for G in (1e-3, 1e-4):
        m = ModelParams(l=1, Gamma=G, n_d=1)
        S, ind = squeezing_limit(m, 1.0, tau, "weak_dissipation")
        np.testing.assert_allclose(ind, G * tau)
        err.append(np.max(np.abs(S - squeezing_closed(m, 1.0, tau))))
    assert err[0] < 2e-4
    assert 8 < err[0] / err[1] < 12


def test_short_time_regime_error_is_quadratic():
    m = ModelParams(l=2, Gamma=0.3, n_d=1)
    err = [abs(squeezing_limit(m, 1.0, t, "short_time")[0] - squeezing_closed(m, 1.0, t))
           for t in (1e-2, 1e-3)]
    assert 80 < err[0] / err[1] < 120


def test_asymptotic_regime_gap_shrinks():
    # the gap closes as tau grows even though the ratio S*tau does not tend to 1
    m = ModelParams(l=1)
    gaps = [abs(squeezing_limit(m, 1.0, t, "asymptotic")[0] - squeezing_closed(m, 1.0, t))
            for t in (10.0, 100.0, 1000.0)]
    assert gaps[0] > gaps[1] > gaps[2]


def test_polarization_and_critical_phonons():
    assert nonlinear_polarization(ModelParams(l=2, g_l=3.0), 2.0) == 48.0
    assert critical_phonons(ModelParams(l=1, Gamma=0.05), 1.0) == pytest.approx(20)
    assert critical_phonons(ModelParams(l=2, Gamma=0.5), 1.0) == pytest.approx(4)
    assert critical_phonons(ModelParams(l=1), 1.0) == math.inf


def test_fano_examples():
    assert fano_from_cumulants(1.0, 0j, 0.5) == 1
    assert fano_from_cumulants(cmath.exp(-1j), -(1 + 1j) * cmath.exp(-2j), 1.5) == \
        pytest.approx(1.0, abs=1e-14)
    assert fano_from_cumulants(1.0, 0.5 + 0j, 0.5) == 2
    assert fano_closed(ModelParams(l=1), 7.0) == 1
    assert fano_closed(ModelParams(l=1, Gamma=0.05), 2.0) == pytest.approx(1.004837, abs=1e-6)
    assert fano_closed(ModelParams(l=1, Gamma=0.5, n_d=1), 2.0) == pytest.approx(3.367879,
                                                                                abs=1e-6)


def test_fano_degenerate_amplitude():
    with pytest.raises(DegenerateAmplitudeError):
        fano_from_cumulants(1e-13, 0j, 0.5)


@given(G=st.floats(0, 5), nd=st.floats(0, 5), tau=st.floats(0, 100))
def test_fano_closed_super_poissonian(G, nd, tau):
    assert fano_closed(ModelParams(l=1, Gamma=G, n_d=nd), tau) >= 1.0


@given(G=st.floats(0, 2), nd=st.floats(0, 3), tau=st.floats(0, 50))
def test_fano_closed_is_l_independent(G, nd, tau):
    vals = {fano_closed(ModelParams(l=l, Gamma=G, n_d=nd), tau) for l in (1, 2, 3, 5)}
    assert len(vals) == 1


@pytest.mark.parametrize("l", [1, 2, 3, 5])
@pytest.mark.parametrize("G", [0.0, 0.05, 0.5])
@pytest.mark.parametrize("nd", [0.0, 1.0])
def test_closed_squeezing_matches_cumulant_route(l, G, nd):
    m = ModelParams(l=l, Gamma=G, n_d=nd)
    tau = np.linspace(0, 10, 201)
    C, B = cumulants_closed(m, 1.0, tau)
    np.testing.assert_allclose(squeezing_closed(m, 1.0, tau), principal_squeezing(C, B),
                               rtol=0, atol=1e-12)


@pytest.mark.parametrize("l, x0, G, nd", [(1, 1.0, 0.05, 0), (1, 1.0, 0.05, 1), (2, 1.0, 0.5, 0),
                                          (3, 0.9, 0.1, 2), (5, 1.0, 0.05, 3), (1, 1.2, 0.5, 1)])
def test_initial_slope(l, x0, G, nd):
    m = ModelParams(l=l, Gamma=G, n_d=nd)
    h = 1e-5
    slope = (squeezing_closed(m, x0, h) - squeezing_closed(m, x0, -h)) / (2 * h)
    assert abs(slope + 2 * (l * x0 ** (2 * l) - G * nd)) <= 1e-4


def test_fano_from_closed_cumulants_agrees_with_closed_fano():
    tau = np.linspace(0, 10, 101)
    for l in (1, 3):
        m = ModelParams(l=l)
        tr = closed_trajectory(m, 1.0, tau)
        np.testing.assert_allclose(fano_from_cumulants(tr.z, tr.C, tr.B), 1.0, atol=1e-10)


def test_fano_from_ode_deviates_at_second_order():
    # the ODE follows exp(-Gamma tau) + (2 n_d + 1)(1 - exp(-Gamma tau)); its gap to the
    # closed form is (2 n_d + 1)(exp(-x) - 1 + x) = O(x^2), x = Gamma tau
    m = ModelParams(l=1, Gamma=0.05, n_d=1)
    tr = integrate_semiclassical(m, 1.0, 4.0, richardson=False)
    F = fano_from_cumulants(tr.z, tr.C, tr.B)
    x = m.Gamma * tr.grid
    np.testing.assert_allclose(F, np.exp(-x) + 3 * (1 - np.exp(-x)), atol=1e-9)
    gap = np.abs(F - fano_closed(m, tr.grid))
    np.testing.assert_allclose(gap, 3 * (np.exp(-x) - 1 + x), atol=1e-9)


def test_observable_series():
    tr = integrate_semiclassical(ModelParams(l=1), 1.0, 1.0, richardson=False)
    obs = observable_series(tr)
    assert obs.S[-1] == pytest.approx(S1, abs=1e-7)
    np.testing.assert_allclose(obs.F, 1.0, atol=1e-10)
    assert len(obs.grid) == len(obs.S) == len(obs.F)
