"""Data-generation tests: innovations, deterministic parts, simulators."""

import math

import numpy as np
import pytest

from longcycle import (
    ARCoefficients,
    ArgumentError,
    DetSpec,
    InnovationSpec,
    Localization,
    build_deterministic,
    phi_from_cd,
    seasonal_dummies,
    simulate_fixed_ar2,
    simulate_innovations,
    simulate_long_cycle,
)
from longcycle._rng import substream


def test_innovation_variance_ar1_closed_form():
    spec = InnovationSpec.ar([0.4], sigma_eps=2.0)
    assert math.isclose(spec.variance, 4.0 / (1 - 0.16), rel_tol=1e-14)
    assert math.isclose(spec.long_run_variance, 4.0 / 0.36, rel_tol=1e-14)


def test_innovation_variance_ar2_yule_walker():
    # rho1(1.5, -0.75) = phi1/(1-phi2) = 6/7; check gamma_0 via the
    # standard AR(2) identity gamma_0 = sigma^2 / (1 - rho1 phi1 - rho2 phi2).
    spec = InnovationSpec.ar([1.5, -0.75], sigma_eps=1.0).validate()
    rho1 = 1.5 / (1 + 0.75)
    rho2 = 1.5 * rho1 - 0.75
    gamma0 = 1.0 / (1 - 1.5 * rho1 + 0.75 * rho2)
    assert math.isclose(spec.variance, gamma0, rel_tol=1e-12)
    assert math.isclose(rho1, 6.0 / 7.0, rel_tol=1e-15)


def test_innovation_validation_rejects_near_unit_root():
    with pytest.raises(ArgumentError):
        InnovationSpec.ar([0.97]).validate()
    InnovationSpec.ar([0.9]).validate()


def test_simulated_innovation_moments():
    spec = InnovationSpec.ar([0.4])
    u = simulate_innovations(spec, 200_000, substream(0))
    assert abs(u.mean()) < 0.02
    assert abs(u.var() - spec.variance) < 0.03
    # Lag-1 autocorrelation of an AR(1) equals rho.
    r1 = np.corrcoef(u[1:], u[:-1])[0, 1]
    assert abs(r1 - 0.4) < 0.02


def test_deterministic_components():
    n = 8
    assert np.array_equal(build_deterministic(DetSpec("none"), n), np.zeros(n))
    assert np.array_equal(build_deterministic(DetSpec("constant", mu=2.5), n), np.full(n, 2.5))
    tr = build_deterministic(DetSpec("trend", mu=1.0, xi=2.0), n)
    assert np.allclose(tr, 1.0 + 2.0 * np.arange(1, n + 1) / n)
    cyc = build_deterministic(DetSpec("cycles", ks=(1,), theta_cos=(3.0,)), n)
    assert np.allclose(cyc, 3.0 * np.cos(2 * np.pi * np.arange(1, n + 1) / n))
    seas = build_deterministic(DetSpec("seasonal", period=4, gamma=(1.0, 0.0, 0.0, 0.0)), n)
    assert np.array_equal(seas, np.array([1, 0, 0, 0, 1, 0, 0, 0], dtype=float))


def test_seasonal_dummies_partition():
    D = seasonal_dummies(4, 10)
    assert D.shape == (10, 4)
    assert np.array_equal(D.sum(axis=1), np.ones(10))
    assert D[0, 0] == 1.0 and D[4, 0] == 1.0 and D[5, 1] == 1.0


def test_det_spec_tokens():
    assert DetSpec("cycles", ks=(2, 1)).token == "cycles:1,2"
    assert DetSpec("seasonal", period=4).token == "seasonal:4"
    assert DetSpec("none").token == "none"


def test_long_cycle_zero_initial_conditions():
    loc = Localization(-5.0, 20.0)
    n = 50
    s = simulate_long_cycle(loc, n, DetSpec("none"), InnovationSpec.iid_normal(), seed=9)
    u = simulate_innovations(InnovationSpec.iid_normal(), n, substream(9))
    phi = phi_from_cd(loc, n)
    assert math.isclose(s.values[0], u[0], rel_tol=1e-12)
    assert math.isclose(s.values[1], phi.phi1 * u[0] + u[1], rel_tol=1e-12)
    # Full recursion replay.
    y = np.zeros(n)
    for t in range(n):
        y[t] = (
            phi.phi1 * (y[t - 1] if t >= 1 else 0.0)
            + phi.phi2 * (y[t - 2] if t >= 2 else 0.0)
            + u[t]
        )
    assert np.allclose(y, s.values, rtol=1e-10, atol=1e-10)


def test_fixed_ar2_burn_zero_matches_long_cycle_recursion():
    # With burn=0 the fixed simulator is the same recursion the long-cycle
    # simulator runs, so at coefficients phi_from_cd they agree exactly.
    loc = Localization(-5.0, 20.0)
    n = 100
    phi = phi_from_cd(loc, n)
    a = simulate_long_cycle(loc, n, DetSpec("none"), InnovationSpec.iid_normal(), seed=4)
    b = simulate_fixed_ar2(phi, n, DetSpec("none"), InnovationSpec.iid_normal(), seed=4, burn=0)
    assert np.array_equal(a.values, b.values)


def test_fixed_ar2_rejects_nonstationary():
    with pytest.raises(ArgumentError):
        simulate_fixed_ar2(
            ARCoefficients(1.2, -0.2), 100, DetSpec("none"), InnovationSpec.iid_normal(), seed=0
        )


def test_same_seed_same_path():
    loc = Localization(-1.0, 5.0)
    a = simulate_long_cycle(loc, 80, DetSpec("constant", mu=1.0), InnovationSpec.ar([0.3]), seed=5)
    b = simulate_long_cycle(loc, 80, DetSpec("constant", mu=1.0), InnovationSpec.ar([0.3]), seed=5)
    c = simulate_long_cycle(loc, 80, DetSpec("constant", mu=1.0), InnovationSpec.ar([0.3]), seed=6)
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)


def test_min_length_enforced():
    with pytest.raises(ArgumentError):
        simulate_long_cycle(Localization(-1, 5), 11, DetSpec("none"), InnovationSpec.iid_normal(), 0)
