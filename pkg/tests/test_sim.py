"""Finite-volume solver: fixed points, conservation, relaxation limit, balances, scans."""
import numpy as np
import pytest

from hypns import kernels, sim
from hypns.eos import PhysicalParams

P = PhysicalParams()
SLOW = PhysicalParams(tau1=10, tau2=10, kappa=15, mu=10)   # same w, z, gamma as P


def _padded_gradients(st, params):
    th = np.concatenate(([1.0], st.theta(params), [1.0]))
    u = np.concatenate(([0.0], st.u, [0.0]))
    return (th[2:] - th[:-2]) / (2 * st.dx), (u[2:] - u[:-2]) / (2 * st.dx)


def test_zero_amplitude_is_exact_equilibrium():
    st = sim.make_initial_data(sim.InitialData(amplitude=0.0), P, 64)
    assert np.all(st.v == 1) and np.all(st.u == 0) and np.all(st.q == 0) and np.all(st.S == 0)
    assert np.all(st.E == P.cv)


def test_initial_amplitude_and_far_field():
    spec = sim.InitialData(amplitude=1e-3, width=4.0)
    st = sim.make_initial_data(spec, P, 2048)
    r = sim.default_direction(P)
    assert r[0] == 1.0
    assert np.max(np.abs(st.v - 1)) == pytest.approx(1e-3 * abs(r[0]), rel=1e-4)
    outside = np.abs(st.x - spec.center) >= spec.width
    assert np.all(st.v[outside] == 1.0) and np.all(st.q[outside] == 0.0)
    assert np.all(st.E[outside] == P.cv)


def test_sawtooth_profile_is_asymmetric():
    spec = sim.InitialData(family="sawtooth", amplitude=1.0, width=1.0, skew=6.0)
    x = np.linspace(-2, 7, 9001)
    phi = spec.profile(x)
    slope = np.diff(phi) / np.diff(x)
    assert phi.max() == pytest.approx(1.0)
    assert slope.max() == pytest.approx(6 * -slope.min(), rel=1e-2)
    assert spec.support() == (-1.0, 6.0)


def test_inadmissible_initial_data_rejected():
    spec = sim.InitialData(amplitude=1.5, direction=(-1.0, 0.0, 0.0, 0.0, 0.0))
    with pytest.raises(ValueError):
        sim.make_initial_data(spec, P, 64)
    with pytest.raises(ValueError):
        sim.InitialData(width=0.0)
    with pytest.raises(ValueError):
        sim.InitialData(family="square")


@pytest.mark.parametrize("backend", ["numpy", "cython"])
def test_equilibrium_fixed_point(backend):
    if backend == "cython" and kernels.compiled_backend is None:
        pytest.skip("compiled kernels not built")
    prev = kernels.use(backend)
    try:
        st = sim.make_initial_data(sim.InitialData(amplitude=0.0), P, 128)
        new = sim.step(st, P)
        for name in ("v", "u", "E", "q", "S"):
            assert np.array_equal(getattr(new, name), getattr(st, name)), name
        assert new.time > 0
    finally:
        kernels.use(prev)


def test_discrete_conservation_per_step():
    st = sim.make_initial_data(sim.InitialData(amplitude=1e-4), P, 512)
    before = st.totals()
    for _ in range(20):
        st = sim.step(st, P)
        after = st.totals()
        np.testing.assert_allclose(after, before, rtol=0, atol=1e-12 * np.abs(before).max())
        before = after


def test_relaxation_limit():
    errs = []
    for tau in (1e-2, 1e-3):
        p = PhysicalParams(tau1=tau, tau2=tau, kappa=1.5, mu=1.0)
        spec = sim.InitialData(amplitude=1e-2, width=3.0, direction=(1, 0.5, 1, 0, 0))
        st = sim.run(spec, p, 0.2, resolution=400, domain=(-10, 10), check_boundary=False,
                     output_every=1000).final
        th_x, u_x = _padded_gradients(st, p)
        q_fourier = -p.kappa * th_x / st.v
        s_newton = p.mu * u_x / st.v
        errs.append(max(np.max(np.abs(st.q - q_fourier)) / np.max(np.abs(q_fourier)),
                        np.max(np.abs(st.S - s_newton)) / np.max(np.abs(s_newton))))
    assert errs[1] < 5e-3
    assert errs[0] / errs[1] > 5        # first order in tau


def test_zero_amplitude_run_diagnostics_constant():
    res = sim.run(sim.InitialData(amplitude=0.0), P, 0.5, resolution=128)
    d = res.diagnostics.arrays()
    assert np.all(d["max_ux"] == 0)
    assert np.all(d["eta_total"] == 0)
    assert np.all(d["balance_residual"] == 0)
    assert np.all(d["dissipation"] == 0)
    assert res.status == "completed" and res.classical


def test_entropy_balance_refines():
    res = {}
    for n in (512, 1024):
        r = sim.run(sim.InitialData(amplitude=1e-3), P, 1.0, resolution=n)
        res[n] = r
    b = {n: np.max(np.abs(sim.entropy_balance(r.diagnostics))) for n, r in res.items()}
    assert b[1024] < 1e-3
    assert b[512] / b[1024] > 2
    s = {n: np.max(np.abs(sim.entropy_identity_residual(r.diagnostics))) for n, r in res.items()}
    assert s[512] / s[1024] > 2


def test_dissipation_nondecreasing_and_flags():
    r = sim.run(sim.InitialData(amplitude=1e-2), P, 1.0, resolution=256, output_every=1)
    diss = np.asarray(r.diagnostics.dissipation)
    assert np.all(np.diff(diss) >= 0)
    assert diss[-1] > 0
    assert r.classical and not r.low_temperature_flag
    assert len(r.diagnostics.t) == r.steps + 1


def test_breakdown_reports_cell_and_time():
    st = sim.make_initial_data(sim.InitialData(amplitude=0.0), P, 32)
    st.E[7] = -1.0
    with pytest.raises(sim.SolverBreakdown) as exc:
        sim.step(st, P, dt=1e-3)
    assert exc.value.cell == 7


def test_boundary_check_stops_run():
    r = sim.run(sim.InitialData(amplitude=1e-3, width=1.0), P, 50.0, resolution=64,
                domain=(-4.0, 4.0))
    assert r.status == "boundary"
    assert r.final.time < 50.0
    r2 = sim.run(sim.InitialData(amplitude=1e-3, width=1.0), P, 3.0, resolution=64,
                 domain=(-4.0, 4.0), check_boundary=False)
    assert r2.status == "completed"


@pytest.mark.skipif(kernels.compiled_backend is None, reason="compiled kernels not built")
def test_backends_agree():
    st = sim.make_initial_data(sim.InitialData(family="sawtooth", amplitude=0.2, width=1.0), SLOW, 300)
    args = (st.v, st.u, st.E, st.q, st.S, st.dx, sim._consts(SLOW), sim._eq_speed(SLOW))
    a = kernels.python_backend.rates(*args)
    b = kernels.compiled_backend.rates(*args)
    for x, y in zip(a, b):
        np.testing.assert_allclose(x, y, rtol=1e-13, atol=1e-13)


def test_genuine_nonlinearity_sign():
    # grad(lambda_4) . r < 0 along the unit-v eigenvector at these parameters
    assert sim.nonlinearity_factor(P) < 0
    assert sim.compressive_sign(sim.InitialData(family="sawtooth"), P) == 1


def test_scan_asymmetry_and_small_amplitude():
    spec = sim.InitialData(family="sawtooth", width=1.0)
    rep = sim.blowup_scan(spec, [0.02, 0.2], [1024], SLOW, t_end=6.0, output_every=2)
    comp, = rep.compressive(0.2)
    rare, = rep.rarefactive(0.2)
    assert comp.peak_ratio > rare.peak_ratio > 1
    for e in rep.entries:
        assert e.t_star is None         # no threshold crossing at this resolution
    assert "peak_ratio" in rep.to_csv().splitlines()[0]


def test_scan_rejects_bad_amplitudes():
    with pytest.raises(ValueError):
        sim.blowup_scan(sim.InitialData(), [0.2, 0.1], [64], P, 1.0)
    with pytest.raises(ValueError):
        sim.blowup_scan(sim.InitialData(), [-0.1], [64], P, 1.0)


def test_inverse_gradient_fit_on_exact_blowup():
    t = np.linspace(0, 0.99, 200)
    g = 1.0 / (1.0 - t)
    r2, tz = sim.inverse_gradient_fit(t, g, t[-1])
    assert r2 == pytest.approx(1.0, abs=1e-12)
    assert tz == pytest.approx(1.0, rel=1e-10)


def test_diagnostics_csv_columns():
    r = sim.run(sim.InitialData(), P, 0.1, resolution=64)
    lines = r.diagnostics.to_csv().splitlines()
    assert lines[0].split(",") == list(sim.RunDiagnostics.COLUMNS)
    assert len(lines) == len(r.diagnostics.t) + 1
