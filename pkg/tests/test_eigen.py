"""Flux matrix, characteristic quartic and hyperbolicity certificate."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypns import eigen
from hypns.eos import PhysicalParams, ThermoState

P = PhysicalParams()
STATE = ThermoState(v=2.0, u=0.5, theta=1.5, q=0.5, s_stress=1.0 / 3.0)


def test_quartic_frozen_rationals():
    c = eigen.quartic_coeffs(STATE, P)
    assert c.c0**2 == pytest.approx(25 / 24, rel=1e-15)
    assert c.a == pytest.approx(36 / 73, rel=1e-15)
    assert c.b == pytest.approx(-10073 / 5256, rel=1e-15)
    assert c.c == pytest.approx(-121 / 292, rel=1e-15)
    assert c.d == pytest.approx(675 / 1168, rel=1e-15)


def test_source_frozen_rationals():
    g = eigen.assemble_flux(STATE, P).source
    np.testing.assert_allclose(g, [0, 0, 36 / 73, -0.5, -1 / 3], rtol=1e-15)


def test_flux_rejects_degenerate_heat_capacity():
    # e_theta = cv - tau1 v q^2 / (kappa theta^2) = 0 here
    p = PhysicalParams(tau1=1.0, kappa=1.0, cv=1.0, gas_const=0.5)
    with pytest.raises(eigen.HyperbolicityError):
        eigen.assemble_flux(ThermoState(v=1.0, u=1.0, theta=1.0, q=1.0, s_stress=0.0), p)


def test_source_vanishes_at_equilibrium():
    sysm = eigen.assemble_flux(ThermoState(), P)
    assert np.all(sysm.source == 0)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.5, 2.0), st.floats(0.5, 2.0), st.floats(-0.3, 0.3), st.floats(-0.5, 0.5))
def test_characteristic_polynomial_factorizes(v, theta, q, s):
    # det(lam I - A) = lam * Pi(lam)
    state = ThermoState(v, 0.0, theta, q, s)
    try:
        coeffs = eigen.quartic_coeffs(state, P)
    except eigen.HyperbolicityError:
        return
    A = eigen.assemble_flux(state, P).matrix
    charpoly = np.poly(A)
    expected = np.append(coeffs.as_poly(), 0.0)
    scale = np.max(np.abs(expected))
    np.testing.assert_allclose(charpoly, expected, atol=1e-10 * scale)


def test_equilibrium_spectrum_exact():
    sp = eigen.equilibrium_spectrum(P)
    s3, s23 = np.sqrt(3.0), np.sqrt(2.0 / 3.0)
    np.testing.assert_allclose(sp.lambdas, [-s3, -s23, 0.0, s23, s3], atol=1e-12)
    assert sp.c0 == pytest.approx(np.sqrt(2.0), rel=1e-15)
    assert np.all(sp.residuals < 1e-12)


def test_solve_quartic_matches_companion():
    rng = np.random.default_rng(5)
    for _ in range(50):
        x = rng.uniform(-0.05, 0.05, 4)
        c = eigen.quartic_coeffs(ThermoState(1 + x[0], 0, 1 + x[1], x[2], x[3]), P)
        ours = eigen.solve_quartic(c)
        ref = np.sort(eigen.companion_roots(c).real)
        np.testing.assert_allclose(ours, ref, atol=1e-12)


def test_spectrum_eigenpairs_and_interlacing():
    sp = eigen.spectrum(STATE, P)
    A = eigen.assemble_flux(STATE, P).matrix
    for k in range(5):
        r = sp.right_vectors[:, k]
        np.testing.assert_allclose(A @ r, sp.lambdas[k] * r, atol=1e-10 * np.linalg.norm(r))
    assert np.all(np.diff(sp.interlaced) > 0)
    assert sp.lambdas[2] == 0.0
    assert sp.gap > 0


def test_equilibrium_eigenvector_closed_form():
    for branch in (1, -1):
        r = eigen.equilibrium_eigenvector(P, branch)
        A = eigen.assemble_flux(ThermoState(), P).matrix
        lam = branch * np.sqrt(2.0 / 3.0)
        np.testing.assert_allclose(A @ r, lam * r, atol=1e-14)


def test_spectrum_delta_knob():
    far = ThermoState(v=1.5)
    eigen.spectrum(far, P)
    with pytest.raises(ValueError):
        eigen.spectrum(far, P, delta=eigen.DEFAULT_DELTA)


def test_loss_of_hyperbolicity_raises():
    # e_theta <= 0: heat flux beyond the relaxation floor
    with pytest.raises(eigen.HyperbolicityError):
        eigen.quartic_coeffs(ThermoState(v=1.0, theta=1.0, q=2.0), P)


def test_sweep_small_radius_passes():
    rep = eigen.hyperbolicity_sweep(1e-3, 500, P, seed=11)
    assert rep.passed
    assert rep.max_residual < eigen.RESIDUAL_TOL
    assert rep.n_samples == 500


def test_sweep_large_radius_fails():
    rep = eigen.hyperbolicity_sweep(10.0, 300, P, seed=0)
    assert not rep.passed
    assert len(rep.failures) > 0


def test_sweep_deterministic_and_worker_independent():
    a = eigen.hyperbolicity_sweep(1e-2, 200, P, seed=42).to_csv()
    b = eigen.hyperbolicity_sweep(1e-2, 200, P, seed=42).to_csv()
    c = eigen.hyperbolicity_sweep(1e-2, 200, P, seed=42, workers=2).to_csv()
    assert a == b == c
    assert a != eigen.hyperbolicity_sweep(1e-2, 200, P, seed=43).to_csv()


def test_sample_ball_radius():
    x = eigen._sample_ball(0.1, 2000, 0)
    assert np.max(np.linalg.norm(x, axis=1)) <= 0.1
    assert np.max(np.linalg.norm(x, axis=1)) > 0.09
