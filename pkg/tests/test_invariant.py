"""Reduced-parameter algebra: exact spot values, roots, regions, monotonicity, certificate."""
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypns import eigen, invariant as inv
from hypns.eos import PhysicalParams, ThermoState

from oracles import quartic_at_equilibrium_exact, reduced_invariant

SPOT = inv.ReducedParams(1.0, 1.0, 5.0 / 3.0)


def test_exact_oracle_spot_values():
    o = reduced_invariant(1, 1, F(5, 3))
    assert o["M"] == F(-218, 27) and o["N"] == F(-38, 9) and o["L"] == F(2, 3)
    assert o["f"] == F(11, 3) and o["g"] == F(7, 3)
    assert o["Q"] == F(-1714, 81) and o["P"] == F(-940, 27) and o["Mg+Q"] == -40
    assert o["R_a"] == o["R_b"] == o["R_c"] == F(-94, 81)


def test_spot_values_float():
    e = inv.riemann_invariant(SPOT)
    o = reduced_invariant(1, 1, F(5, 3))
    for key in ("L", "f", "g", "M", "N", "P", "Q"):
        assert getattr(e, key) == pytest.approx(float(o[key]), rel=1e-14), key
    for key in ("R_a", "R_b", "R_c"):
        assert getattr(e, key) == pytest.approx(-94 / 81, rel=1e-12), key
    assert not e.c_skipped


@pytest.mark.parametrize("w,z,gamma", [(F(3, 7), F(2), F(7, 5)), (F(4), F(1, 3), F(6, 5)),
                                       (F(1, 10), F(10), F(5, 3))])
def test_three_expressions_agree(w, z, gamma):
    e = inv.riemann_invariant(inv.ReducedParams(float(w), float(z), float(gamma)))
    assert e.R_b == pytest.approx(e.R_a, rel=1e-9)
    assert e.R_c == pytest.approx(e.R_a, rel=1e-9)


def test_L_is_equilibrium_eigenvalue_squared():
    o = quartic_at_equilibrium_exact(1, 1, F(5, 3))
    a, b, c, d = o
    L = F(2, 3)
    # lambda^2 = L solves the biquadratic x^2 + b x + d = 0 (a = c = 0 at rest)
    assert L * L + b * L + d == 0


def test_decimal_evaluation_matches_exact():
    assert inv.riemann_invariant_decimal(1.0, 1.0, 5 / 3) == pytest.approx((-94 / 81,) * 3, rel=1e-15)


def test_root_spot_values():
    t = inv.root_table(1.0, 5 / 3)
    assert t.w_N == pytest.approx(40 / 21, rel=1e-14)
    assert t.w_M == pytest.approx((-66 + np.sqrt(50436)) / 72, rel=1e-14)
    assert t.ordered


def test_roots_are_roots_and_ordered_on_grid():
    z = np.geomspace(1e-3, 1e3, 60)
    for g in inv.DEFAULT_GAMMAS:
        t = inv.root_table(z, g)
        assert np.all(t.ordered)
        for name, res in inv.root_residuals(t).items():
            assert np.max(res) < 1e-10, name


def test_region_partition_labels():
    t = inv.root_table(1.0, 5 / 3)
    assert inv.region_partition(1.0, 5 / 3, 0.5 * t.w_N).label == "(0,w_N]"
    assert inv.region_partition(1.0, 5 / 3, 0.5 * (t.w_N + t.w_M)).expression == "a"
    assert inv.region_partition(1.0, 5 / 3, 1e3).expression in ("b", "c")


def test_monotonicity_constants():
    g0 = inv.gamma0()
    assert 1 < g0 < 5 / 3
    assert abs(inv.a0(g0)) < 1e-9
    assert inv.a0(1.0) == 4
    assert inv.a0(5 / 3) == pytest.approx(-164 / 9, rel=1e-14)


@settings(max_examples=300, deadline=None)
@given(st.floats(1.001, 5 / 3), st.floats(-3, 3))
def test_monotonicity_matches_sampling(gamma, logz):
    z = 10.0**logz
    verdict = inv.classify_monotonicity(gamma, z)
    w_m = inv.root_table(z, gamma).w_M
    assert verdict.monotone == inv.sample_Q_monotone(gamma, z, 10 * w_m)


def test_gradient_bridge_spot_values():
    for (w, z, g, R, expected) in [(1, 1, 5 / 3, 1.0, -94 / 81), (1, 1, 5 / 3, 1.3, -94 / 81)]:
        p = PhysicalParams.from_reduced(w, z, g, gas_const=R)
        grad = inv.grad_Pi_equilibrium(inv.ReducedParams(w, z, g), R)
        r = eigen.equilibrium_eigenvector(p)
        val = grad @ r[[0, 2, 3, 4]] / R**3
        assert val == pytest.approx(expected, rel=1e-12)


def test_gradient_matches_finite_differences():
    w, z, g, R = 0.7, 2.5, 1.4, 1.7
    p = PhysicalParams.from_reduced(w, z, g, gas_const=R)
    grad = inv.grad_Pi_equilibrium(inv.ReducedParams(w, z, g), R)
    lam = np.sqrt(inv.eval_L(inv.ReducedParams(w, z, g)) * R)
    h = 1e-6
    base = np.array([1.0, 1.0, 0.0, 0.0])
    for k in range(4):
        vals = []
        for sgn in (1, -1):
            x = base.copy()
            x[k] += sgn * h
            c = eigen.quartic_coeffs(ThermoState(x[0], 0.0, x[1], x[2], x[3]), p)
            vals.append(eigen.char_quartic(c, lam))
        fd = (vals[0] - vals[1]) / (2 * h)
        assert fd == pytest.approx(grad[k], rel=1e-6, abs=1e-9 * np.max(np.abs(grad)))


def test_branch_independence():
    # dPi/dq and the q component of r* are both odd in the eigenvalue
    for w, z, g in [(1, 1, 5 / 3), (0.3, 4.0, 1.2)]:
        p = PhysicalParams.from_reduced(w, z, g)
        rp = inv.ReducedParams(w, z, g)
        vals = [inv.grad_Pi_equilibrium(rp, 1.0, b) @ eigen.equilibrium_eigenvector(p, b)[[0, 2, 3, 4]]
                for b in (1, -1)]
        assert vals[0] == pytest.approx(vals[1], rel=1e-13)


def test_certificate_small_grid():
    rep = inv.negativity_certificate(n_w=30, n_z=30)
    assert rep.passed
    assert rep.max_R < 0
    assert rep.max_spread < 1e-9
    s = rep.summary()
    assert set(s["argmax"]) == {"gamma", "z", "w", "R"}
    assert sum(s["region_counts"].values()) == 30 * 30 * len(inv.DEFAULT_GAMMAS)


def test_certificate_includes_upper_gamma():
    rep = inv.negativity_certificate(n_w=5, n_z=5, gammas=[5 / 3])
    assert rep.passed


def test_degenerate_band_skips_expression_c():
    p = inv.ReducedParams(1.0, 1.0, 5 / 3)
    old = inv.DEGENERATE_REL
    try:
        inv.DEGENERATE_REL = 10.0    # every point counts as degenerate
        e = inv.riemann_invariant(p)
        assert e.c_skipped and np.isnan(e.R_c)
    finally:
        inv.DEGENERATE_REL = old


def test_reduced_params_validation():
    with pytest.raises(ValueError):
        inv.ReducedParams(-1.0, 1.0, 1.4)
    with pytest.raises(ValueError):
        inv.ReducedParams(1.0, 1.0, 2.0)
    with pytest.raises(ValueError):
        inv.ReducedParams(1.0, 1.0, 1.0)
