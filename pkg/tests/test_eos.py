"""Equation of state: frozen rational values, identities and validation."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypns import eos
from hypns.eos import PhysicalParams, ThermoState

P = PhysicalParams()
# rational test state; values below were computed with exact fractions
STATE = ThermoState(v=2.0, u=0.5, theta=1.5, q=0.5, s_stress=1.0 / 3.0)


def test_frozen_values():
    assert eos.pressure(STATE, P) == pytest.approx(23 / 36, rel=1e-15)
    assert eos.internal_energy(STATE, P) == pytest.approx(31 / 12, rel=1e-15)
    assert eos.dissipation_rate(STATE, P) == pytest.approx(8 / 27, rel=1e-15)
    assert eos.entropy(STATE, P) == pytest.approx(1.3754189167962659565, rel=1e-14)
    assert eos.relative_entropy(STATE, P) == pytest.approx(0.83291441653706737688, rel=1e-14)
    assert eos.thermo_partials(STATE, P).e_theta == pytest.approx(73 / 54, rel=1e-15)


def test_equilibrium_values():
    eq = eos.EQUILIBRIUM
    assert eos.pressure(eq, P) == 1.0
    assert eos.internal_energy(eq, P) == P.cv
    assert eos.entropy(eq, P) == 0.0
    assert eos.relative_entropy(eq, P) == 0.0
    assert eos.dissipation_rate(eq, P) == 0.0


def test_check_suite_passes():
    results = eos.check_suite(P, samples=2000, seed=3)
    assert {r.name for r in results} >= {"gibbs", "temperature_roundtrip", "closure_ds_dq"}
    assert all(r.passed for r in results), [r.to_dict() for r in results if not r.passed]


def test_check_suite_other_params():
    params = PhysicalParams(tau1=0.3, tau2=2.0, kappa=0.7, mu=3.0, gas_const=0.4, cv=1.1)
    assert all(r.passed for r in eos.check_suite(params, samples=500, seed=1))


def test_correction_coefficients_reassemble():
    a, b, alpha, beta = eos.correction_coefficients(STATE.v, STATE.theta, P)
    q, s = STATE.q, STATE.s_stress
    e_eq = P.cv * STATE.theta
    p_eq = P.gas_const * STATE.theta / STATE.v
    assert e_eq + a * q**2 + b * s**2 == pytest.approx(eos.internal_energy(STATE, P), rel=1e-15)
    assert p_eq + alpha * q**2 + beta * s**2 == pytest.approx(eos.pressure(STATE, P), rel=1e-15)


def test_second_partials_match_differences():
    h = 1e-5
    sp = eos.second_partials(STATE, P)
    d_plus = eos.thermo_partials(ThermoState(STATE.v, 0, STATE.theta, STATE.q + h, STATE.s_stress), P)
    d_minus = eos.thermo_partials(ThermoState(STATE.v, 0, STATE.theta, STATE.q - h, STATE.s_stress), P)
    assert (d_plus.p_q - d_minus.p_q) / (2 * h) == pytest.approx(sp["p_qq"], rel=1e-8)
    assert (d_plus.e_q - d_minus.e_q) / (2 * h) == pytest.approx(sp["e_qq"], rel=1e-8)
    assert (d_plus.e_theta - d_minus.e_theta) / (2 * h) == pytest.approx(sp["e_thetaq"], rel=1e-7)


def test_recover_temperature_branch_and_errors():
    e = eos.internal_energy(STATE, P)
    assert eos.recover_temperature(STATE.v, e, STATE.q, STATE.s_stress, P) == pytest.approx(1.5, rel=1e-15)
    # no real temperature: energy below the relaxation floor
    with pytest.raises(eos.RelaxationFloorError):
        eos.recover_temperature(1.0, 0.1, 5.0, 0.0, P)
    with pytest.raises(eos.AdmissibilityError):
        eos.recover_temperature(-1.0, 1.0, 0.0, 0.0, P)


def test_inadmissible_states_rejected():
    with pytest.raises(eos.AdmissibilityError):
        eos.pressure(ThermoState(v=0.0), P)
    with pytest.raises(eos.AdmissibilityError):
        eos.entropy(ThermoState(theta=-1.0), P)


@pytest.mark.parametrize("kw", [{"kappa": -1.0}, {"mu": 0.0}, {"cv": 0.5},
                                {"gamma": 2.0}, {"gamma": 1.4}])
def test_params_validation(kw):
    with pytest.raises(ValueError):
        PhysicalParams(**kw)


def test_params_reduced_roundtrip():
    p = PhysicalParams.from_reduced(0.7, 3.0, 1.4, gas_const=2.0, tau1=0.5, tau2=4.0)
    assert p.w == pytest.approx(0.7, rel=1e-15)
    assert p.z == pytest.approx(3.0, rel=1e-15)
    assert p.gamma == pytest.approx(1.4, rel=1e-15)
    assert PhysicalParams(gamma=5 / 3).gamma == pytest.approx(5 / 3)


states = st.tuples(st.floats(0.2, 5.0), st.floats(-2.0, 2.0), st.floats(0.2, 5.0),
                   st.floats(-1.0, 1.0), st.floats(-2.0, 2.0))


@settings(max_examples=200, deadline=None)
@given(states)
def test_dissipation_nonnegative_and_gibbs(x):
    s = ThermoState(*x)
    assert eos.dissipation_rate(s, P) >= 0
    scale = abs(s.theta * eos.thermo_partials(s, P).p_theta) + abs(eos.pressure(s, P))
    assert abs(eos.gibbs_residual(s, P)) <= 1e-12 * scale


@settings(max_examples=200, deadline=None)
@given(states)
def test_relative_entropy_nonnegative_above_half(x):
    # the q-term prefactor 1 - 1/(2 theta) is nonnegative for theta >= 1/2
    s = ThermoState(*x)
    if s.theta >= 0.5:
        assert eos.relative_entropy(s, P) >= -1e-15


@settings(max_examples=200, deadline=None)
@given(states)
def test_temperature_roundtrip_property(x):
    s = ThermoState(*x)
    if eos.thermo_partials(s, P).e_theta <= 0.05 * P.cv:
        return   # the recovery picks the other branch there
    e = eos.internal_energy(s, P)
    theta = eos.recover_temperature(s.v, e, s.q, s.s_stress, P)
    assert theta == pytest.approx(s.theta, rel=1e-11)


def test_vectorized_evaluation():
    rng = np.random.default_rng(0)
    sts = eos.random_states(50, rng, P)
    p = eos.pressure(sts, P)
    single = [eos.pressure(ThermoState(sts.v[i], sts.u[i], sts.theta[i], sts.q[i], sts.s_stress[i]), P)
              for i in range(50)]
    np.testing.assert_allclose(p, single, rtol=0, atol=0)
