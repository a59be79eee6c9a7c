"""Lagrangian finite-volume solver for the relaxed Navier-Stokes system.

Conserved fields ``(v, u, E = e + u^2/2)`` use MUSCL-minmod reconstruction
of the primitive variables with a local Lax-Friedrichs (Rusanov) flux whose
speed is the largest characteristic speed of the adjacent cells.  The
balance laws for ``q`` and ``S`` use centered differences for ``theta_x`` and
``u_x``, and their relaxation terms are integrated exactly.  Time stepping
is an exponential SSP-RK2 (ETD2RK), which reduces to Heun's method on the
conserved fields.  Two ghost cells per side are frozen at equilibrium.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .eigen import equilibrium_eigenvector, spectrum
from .eos import PhysicalParams, ThermoState

log = logging.getLogger(__name__)

__all__ = [
    "SolverBreakdown",
    "InitialData",
    "GridState",
    "RunDiagnostics",
    "RunResult",
    "ScanReport",
    "bump",
    "make_initial_data",
    "step",
    "run",
    "entropy_balance",
    "nonlinearity_factor",
    "compressive_sign",
    "blowup_scan",
]

DEFAULT_DOMAIN = (-20.0, 20.0)
DEFAULT_RESOLUTION = 2048
DEFAULT_CFL = 0.4
BLOWUP_THRESHOLD = 1e3
RESOLVED_CELLS = 8


class SolverBreakdown(RuntimeError):
    """A cell left the admissible set (``v <= 0``, ``theta <= 0`` or no real temperature)."""

    def __init__(self, cell, time):
        super().__init__(f"solver breakdown at cell {cell}, t = {time:.6g}")
        self.cell = cell
        self.time = time


def bump(s):
    """C^2 compactly supported bump ``(1 - s^2)^3`` on ``|s| < 1``, peak 1 at 0."""
    s = np.asarray(s, dtype=float)
    return np.where(np.abs(s) < 1, (1 - s * s) ** 3, 0.0)


@dataclass(frozen=True)
class InitialData:
    """Equilibrium plus ``amplitude * profile((x - center)/width) * direction``.

    ``family`` is ``"bump"`` (symmetric) or ``"sawtooth"``: a bump of
    half-width ``width`` on the left of ``center`` glued to one of half-width
    ``skew * width`` on the right, so one flank is ``skew`` times steeper.
    ``direction`` defaults to the equilibrium eigenvector of the fourth
    field scaled to unit ``v`` component.
    """

    family: str = "bump"
    amplitude: float = 1e-3
    width: float = 4.0
    center: float = 0.0
    direction: Optional[tuple] = None
    skew: float = 6.0

    def __post_init__(self):
        if self.family not in ("bump", "sawtooth"):
            raise ValueError(f"unknown initial-data family {self.family!r}")
        if not self.width > 0 or not self.skew > 0:
            raise ValueError("width and skew must be positive")

    def profile(self, x):
        s = (np.asarray(x, dtype=float) - self.center) / self.width
        if self.family == "bump":
            return bump(s)
        return np.where(s <= 0, bump(s), bump(s / self.skew))

    def support(self):
        right = self.width * (self.skew if self.family == "sawtooth" else 1.0)
        return self.center - self.width, self.center + right

    def to_dict(self) -> dict:
        return {"family": self.family, "amplitude": self.amplitude, "width": self.width,
                "center": self.center, "skew": self.skew,
                "direction": None if self.direction is None else [float(d) for d in self.direction]}


@dataclass
class GridState:
    v: np.ndarray
    u: np.ndarray
    E: np.ndarray
    q: np.ndarray
    S: np.ndarray
    dx: float
    time: float = 0.0
    domain: tuple = DEFAULT_DOMAIN

    @property
    def n(self) -> int:
        return self.v.size

    @property
    def x(self) -> np.ndarray:
        return self.domain[0] + (np.arange(self.n) + 0.5) * self.dx

    def theta(self, params: PhysicalParams) -> np.ndarray:
        return kernels.temperature(self.v, self.E, self.u, self.q, self.S, _consts(params))

    def copy(self) -> "GridState":
        return replace(self, v=self.v.copy(), u=self.u.copy(), E=self.E.copy(),
                       q=self.q.copy(), S=self.S.copy())

    def totals(self) -> np.ndarray:
        """Cell sums (times ``dx``) of the conserved fields ``v, u, E``."""
        return np.array([self.v.sum(), self.u.sum(), self.E.sum()]) * self.dx


def _consts(params: PhysicalParams):
    return (params.tau1, params.tau2, params.kappa, params.mu, params.gas_const, params.cv)


def _eq_speed(params: PhysicalParams) -> float:
    one = np.ones(1)
    return float(kernels.max_speed(one, one, 0 * one, 0 * one, _consts(params))[0])


def default_direction(params: PhysicalParams) -> np.ndarray:
    r = equilibrium_eigenvector(params, branch=1)
    return r / r[0]


def make_initial_data(spec: InitialData, params: PhysicalParams,
                      resolution: int = DEFAULT_RESOLUTION, domain=DEFAULT_DOMAIN) -> GridState:
    if resolution < 4:
        raise ValueError("resolution must be at least 4 cells")
    lo, hi = domain
    dx = (hi - lo) / resolution
    x = lo + (np.arange(resolution) + 0.5) * dx
    direction = np.asarray(spec.direction if spec.direction is not None
                           else default_direction(params), dtype=float)
    if direction.shape != (5,):
        raise ValueError("direction must have five components")
    bumpvals = spec.amplitude * spec.profile(x)
    v = 1.0 + bumpvals * direction[0]
    u = bumpvals * direction[1]
    theta = 1.0 + bumpvals * direction[2]
    q = bumpvals * direction[3]
    S = bumpvals * direction[4]
    if np.any(v <= 0) or np.any(theta <= 0):
        raise ValueError("initial data is inadmissible (amplitude too large)")
    p = params
    E = (p.cv * theta + p.tau1 * v * q**2 / (p.kappa * theta)
         + p.tau2 * v * S**2 / (2 * p.mu) + 0.5 * u**2)
    if np.any(p.cv - p.tau1 * v * q**2 / (p.kappa * theta**2) <= 0):
        raise ValueError("initial data violates e_theta > 0 (amplitude too large)")
    return GridState(v, u, E, q, S, dx, 0.0, tuple(domain))


def _rates(st: GridState, params, eq_speed):
    try:
        return kernels.rates(st.v, st.u, st.E, st.q, st.S, st.dx, _consts(params), eq_speed)
    except FloatingPointError as exc:
        raise SolverBreakdown(int(exc.args[0]), st.time) from None


def _advance(state: GridState, params: PhysicalParams, r0, h: float, eq_speed: float) -> GridState:
    """ETD-SSP-RK2 update from precomputed rates ``r0`` at ``state``."""
    dv, du, dE, qt, st = r0[:5]
    # 1 - exp(-h/tau) via expm1 stays accurate for h << tau
    c1 = -np.expm1(-h / params.tau1)
    c2 = -np.expm1(-h / params.tau2)
    stage = GridState(state.v + h * dv, state.u + h * du, state.E + h * dE,
                      state.q + c1 * (qt - state.q), state.S + c2 * (st - state.S),
                      state.dx, state.time + h, state.domain)
    dv1, du1, dE1, qt1, st1 = _rates(stage, params, eq_speed)[:5]
    w1 = 1 - params.tau1 * c1 / h
    w2 = 1 - params.tau2 * c2 / h
    return GridState(state.v + 0.5 * h * (dv + dv1), state.u + 0.5 * h * (du + du1),
                     state.E + 0.5 * h * (dE + dE1),
                     stage.q + (qt1 - qt) * w1, stage.S + (st1 - st) * w2,
                     state.dx, state.time + h, state.domain)


def _time_step(state: GridState, speed, eq_speed: float, cfl: float) -> float:
    return cfl * state.dx / max(float(np.max(speed)), eq_speed)


def step(state: GridState, params: PhysicalParams, cfl: float = DEFAULT_CFL,
         dt: Optional[float] = None) -> GridState:
    """Advance one ETD-SSP-RK2 step; ``dt`` defaults to ``cfl dx / max speed``.

    Raises ``SolverBreakdown`` when a stage or the result is inadmissible.
    """
    eq_speed = _eq_speed(params)
    r0 = _rates(state, params, eq_speed)
    h = _time_step(state, r0[6], eq_speed, cfl) if dt is None else dt
    new = _advance(state, params, r0, h, eq_speed)
    theta = kernels.temperature(new.v, new.E, new.u, new.q, new.S, _consts(params))
    bad = np.flatnonzero(~(new.v > 0) | ~(theta > 0))
    if bad.size:
        raise SolverBreakdown(int(bad[0]), new.time)
    return new


# ---------------------------------------------------------------------------
# diagnostics

def _max_grad(f, fill, dx):
    padded = np.concatenate(([fill], f, [fill]))
    return float(np.max(np.abs(np.diff(padded)))) / dx


def _pointwise(state: GridState, params: PhysicalParams):
    p = params
    theta = state.theta(p)
    v, u, q, S = state.v, state.u, state.q, state.S
    eta = (p.cv * (theta - 1 - np.log(theta)) + p.gas_const * (v - 1 - np.log(v)) + 0.5 * u**2
           + (1 - 1 / (2 * theta)) * p.tau1 * v * q**2 / (p.kappa * theta)
           + p.tau2 * v * S**2 / (2 * p.mu))
    s = p.cv * np.log(theta) + p.gas_const * np.log(v) + p.tau1 * v * q**2 / (2 * p.kappa * theta**2)
    diss = v * q**2 / (p.kappa * theta**2) + v * S**2 / (p.mu * theta)
    return theta, eta, s, diss


def _production(state: GridState, theta, params: PhysicalParams) -> float:
    p = params
    v = state.v
    d = v * state.q**2 / (p.kappa * theta**2) + v * state.S**2 / (p.mu * theta)
    return float(np.sum(d)) * state.dx


@dataclass
class RunDiagnostics:
    """Time series sampled every ``output_every`` steps (and at the end)."""

    t: list = field(default_factory=list)
    max_ux: list = field(default_factory=list)
    max_thetax: list = field(default_factory=list)
    eta_total: list = field(default_factory=list)
    dissipation: list = field(default_factory=list)       # time integral of the production
    entropy_total: list = field(default_factory=list)
    min_v: list = field(default_factory=list)
    min_theta: list = field(default_factory=list)
    resolved_cells: list = field(default_factory=list)

    COLUMNS = ("t", "max_ux", "max_thetax", "eta_total", "dissipation", "balance_residual",
               "entropy_residual", "min_v", "min_theta", "resolved_cells")

    def arrays(self) -> dict:
        out = {k: np.asarray(getattr(self, k), dtype=float) for k in
               ("t", "max_ux", "max_thetax", "eta_total", "dissipation", "entropy_total",
                "min_v", "min_theta", "resolved_cells")}
        out["balance_residual"] = entropy_balance(self)
        out["entropy_residual"] = entropy_identity_residual(self)
        return out

    def to_csv(self) -> str:
        arr = self.arrays()
        lines = [",".join(self.COLUMNS)]
        for i in range(len(self.t)):
            lines.append(",".join(repr(float(arr[k][i])) for k in self.COLUMNS))
        return "\n".join(lines) + "\n"


def entropy_balance(diag: RunDiagnostics) -> np.ndarray:
    """``([eta](t) + int_0^t D - [eta](0)) / [eta](0)``; zero when ``[eta](0) = 0``."""
    eta = np.asarray(diag.eta_total, dtype=float)
    diss = np.asarray(diag.dissipation, dtype=float)
    if eta.size == 0:
        return eta
    raw = eta + diss - eta[0]
    return raw / eta[0] if eta[0] > 0 else raw


def entropy_identity_residual(diag: RunDiagnostics) -> np.ndarray:
    """``[s](t) - [s](0) - int_0^t D`` (the flux ``q/theta`` integrates to zero)."""
    s = np.asarray(diag.entropy_total, dtype=float)
    diss = np.asarray(diag.dissipation, dtype=float)
    return s - s[0] - diss if s.size else s


@dataclass
class RunResult:
    diagnostics: RunDiagnostics
    final: GridState
    status: str                      # "completed", "breakdown", "threshold", "boundary"
    steps: int
    breakdown_time: Optional[float] = None
    threshold_time: Optional[float] = None
    message: str = ""

    @property
    def classical(self) -> bool:
        d = self.diagnostics
        return (self.status in ("completed", "threshold")
                and min(d.min_v) > 0 and min(d.min_theta) > 0
                and min(d.resolved_cells) >= RESOLVED_CELLS)

    @property
    def low_temperature_flag(self) -> bool:
        """Temperature fell to 1/2 or below, where the relative entropy may lose convexity."""
        return min(self.diagnostics.min_theta) <= 0.5

    def summary(self) -> dict:
        res = entropy_balance(self.diagnostics)
        return {"status": self.status, "steps": self.steps, "t_final": self.final.time,
                "classical": self.classical, "breakdown_time": self.breakdown_time,
                "threshold_time": self.threshold_time,
                "max_abs_balance_residual": float(np.max(np.abs(res))) if res.size else 0.0,
                "low_temperature_flag": self.low_temperature_flag, "message": self.message}


def run(spec: InitialData, params: PhysicalParams, t_end: float, cfl: float = DEFAULT_CFL,
        resolution: int = DEFAULT_RESOLUTION, domain=DEFAULT_DOMAIN, output_every: int = 10,
        threshold: Optional[float] = None, check_boundary: bool = True,
        state: Optional[GridState] = None) -> RunResult:
    """Evolve ``spec`` to ``t_end``.

    Stops early on breakdown, on ``max|u_x|`` exceeding ``threshold`` times its
    initial value (when given), or when the fastest possible signal from the
    initial support reaches a boundary (when ``check_boundary``).
    """
    if not t_end >= 0:
        raise ValueError("t_end must be non-negative")
    st = state if state is not None else make_initial_data(spec, params, resolution, domain)
    eq_speed = _eq_speed(params)
    diag = RunDiagnostics()
    lo, hi = st.domain
    support = spec.support() if spec.amplitude != 0 else None
    front = [support[0], support[1]] if support else None
    margin = 3 * st.dx
    diss = 0.0

    def record(s):
        theta, eta, ent, _ = _pointwise(s, params)
        diag.t.append(s.time)
        gu = _max_grad(s.u, 0.0, s.dx)
        diag.max_ux.append(gu)
        diag.max_thetax.append(_max_grad(theta, 1.0, s.dx))
        diag.eta_total.append(float(np.sum(eta)) * s.dx)
        diag.entropy_total.append(float(np.sum(ent)) * s.dx)
        diag.dissipation.append(diss)
        diag.min_v.append(float(np.min(s.v)))
        diag.min_theta.append(float(np.min(theta)))
        span = float(np.max(s.u) - np.min(s.u))
        diag.resolved_cells.append(np.inf if gu == 0 else span / (gu * s.dx))

    record(st)
    g0 = diag.max_ux[0]
    status, steps, msg = "completed", 0, ""
    breakdown_time = threshold_time = None
    try:
        r0 = _rates(st, params, eq_speed)
    except SolverBreakdown as exc:
        raise ValueError(f"initial state is inadmissible: {exc}") from None
    prod = _production(st, r0[5], params)
    while st.time < t_end * (1 - 1e-14):
        smax = max(float(np.max(r0[6])), eq_speed)
        h = min(cfl * st.dx / smax, t_end - st.time)
        try:
            new = _advance(st, params, r0, h, eq_speed)
            r_new = _rates(new, params, eq_speed)
        except SolverBreakdown as exc:
            status, breakdown_time = "breakdown", st.time + h
            msg = f"solver breakdown at cell {exc.cell}, t = {breakdown_time:.6g}"
            break
        prod_new = _production(new, r_new[5], params)
        diss += 0.5 * h * (prod + prod_new)
        prod, r0, st = prod_new, r_new, new
        steps += 1
        if front is not None:
            front[0] -= smax * h
            front[1] += smax * h
        gu = _max_grad(st.u, 0.0, st.dx)
        crossed = threshold is not None and g0 > 0 and gu >= threshold * g0
        hit_wall = check_boundary and front is not None and (
            front[0] <= lo + margin or front[1] >= hi - margin)
        if steps % output_every == 0 or crossed or hit_wall or st.time >= t_end * (1 - 1e-14):
            record(st)
        if crossed:
            status, threshold_time = "threshold", st.time
            break
        if hit_wall:
            status, msg = "boundary", f"signal front reached the boundary at t = {st.time:.6g}"
            break
    if diag.t[-1] != st.time:
        record(st)
    if status == "breakdown":
        log.warning(msg)
    return RunResult(diag, st, status, steps, breakdown_time, threshold_time, msg)


# ---------------------------------------------------------------------------
# blow-up experiments

def nonlinearity_factor(params: PhysicalParams, direction=None, h: float = 1e-6) -> float:
    """Directional derivative of the fourth eigenvalue along ``direction`` at equilibrium."""
    r = np.asarray(direction if direction is not None else default_direction(params), dtype=float)
    lam = []
    for sgn in (1, -1):
        x = np.array([1.0, 0.0, 1.0, 0.0, 0.0]) + sgn * h * r
        lam.append(spectrum(ThermoState(*x), params).lambdas[3])
    return (lam[0] - lam[1]) / (2 * h)


def compressive_sign(spec: InitialData, params: PhysicalParams) -> int:
    """Sign of the amplitude that makes the steeper flank compressive for the fourth field."""
    r = spec.direction if spec.direction is not None else default_direction(params)
    factor = nonlinearity_factor(params, r)
    # steep flank: the left one for "sawtooth" (rising), either for "bump"
    return -1 if factor > 0 else 1


@dataclass
class ScanEntry:
    amplitude: float
    resolution: int
    sign: int
    t_star: Optional[float]          # threshold crossing or breakdown time
    status: str
    peak_ratio: float
    peak_time: float
    fit_r2: Optional[float] = None
    fit_blowup_time: Optional[float] = None
    peak_fit_r2: Optional[float] = None          # same fit, ending at the peak instead of T*
    peak_fit_blowup_time: Optional[float] = None
    t: np.ndarray = None
    ratio: np.ndarray = None

    COLUMNS = ("amplitude", "resolution", "sign", "t_star", "status", "peak_ratio", "peak_time",
               "fit_r2", "fit_blowup_time", "peak_fit_r2", "peak_fit_blowup_time")

    def row(self) -> dict:
        return {"amplitude": self.amplitude, "resolution": self.resolution, "sign": self.sign,
                "t_star": self.t_star, "status": self.status, "peak_ratio": self.peak_ratio,
                "peak_time": self.peak_time, "fit_r2": self.fit_r2,
                "fit_blowup_time": self.fit_blowup_time, "peak_fit_r2": self.peak_fit_r2,
                "peak_fit_blowup_time": self.peak_fit_blowup_time}


def inverse_gradient_fit(t, g, t_star, decade: float = 10.0):
    """Linear fit of ``1/g`` against ``t`` over samples with ``g >= g(t_star)/decade``, ``t <= t_star``.

    Returns ``(r2, t_zero)`` where ``t_zero`` is where the fitted line hits zero.
    """
    t = np.asarray(t, dtype=float)
    g = np.asarray(g, dtype=float)
    k_end = int(np.searchsorted(t, t_star, side="right"))
    t, g = t[:k_end], g[:k_end]
    if t.size < 3:
        return None, None
    sel = g >= g[-1] / decade
    # keep the final contiguous stretch
    start = t.size - 1
    while start > 0 and sel[start - 1]:
        start -= 1
    tt, yy = t[start:], 1.0 / g[start:]
    if tt.size < 3:
        return None, None
    A = np.vstack([tt, np.ones_like(tt)]).T
    coef, *_ = np.linalg.lstsq(A, yy, rcond=None)
    pred = A @ coef
    ss_res = float(np.sum((yy - pred) ** 2))
    ss_tot = float(np.sum((yy - yy.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    t_zero = -coef[1] / coef[0] if coef[0] < 0 else None
    return r2, t_zero


@dataclass
class ScanReport:
    entries: list
    threshold: float
    params: PhysicalParams

    def compressive(self, amplitude):
        return [e for e in self.entries if e.amplitude == amplitude and e.sign > 0]

    def rarefactive(self, amplitude):
        return [e for e in self.entries if e.amplitude == amplitude and e.sign < 0]

    def t_star_variation(self, amplitude) -> Optional[float]:
        """Relative spread of ``T*`` across resolutions (``None`` if any run never crossed)."""
        ts = [e.t_star for e in self.compressive(amplitude)]
        if not ts or any(t is None for t in ts):
            return None
        return (max(ts) - min(ts)) / min(ts)

    def stabilizes(self, amplitude, tol: float = 0.1) -> bool:
        var = self.t_star_variation(amplitude)
        return var is not None and var < tol

    def table(self) -> list:
        return [e.row() for e in self.entries]

    def to_csv(self) -> str:
        cols = list(ScanEntry.COLUMNS)
        lines = [",".join(cols)]
        for row in self.table():
            lines.append(",".join("" if row[c] is None else str(row[c]) for c in cols))
        return "\n".join(lines) + "\n"


def blowup_scan(spec: InitialData, amplitudes: Sequence[float], resolutions: Sequence[int],
                params: PhysicalParams, t_end: float, threshold: float = BLOWUP_THRESHOLD,
                cfl: float = DEFAULT_CFL, domain=DEFAULT_DOMAIN, output_every: int = 5,
                rarefactive: bool = True) -> ScanReport:
    """Compressive and rarefactive runs for each amplitude and resolution.

    ``T*`` is the first time ``max|u_x|`` reaches ``threshold`` times its
    initial value, or the breakdown time.  The rarefactive partner runs to
    ``2 T*`` (or ``t_end`` when no crossing occurred).
    """
    amps = list(amplitudes)
    if any(a <= 0 for a in amps) or amps != sorted(amps):
        raise ValueError("amplitudes must be positive and ascending")
    sign = compressive_sign(spec, params)
    entries = []
    for amp in amps:
        for n in resolutions:
            base = spec.direction if spec.direction is not None else default_direction(params)
            comp_spec = replace(spec, amplitude=amp,
                                direction=tuple(sign * np.asarray(base, dtype=float)))
            res = run(comp_spec, params, t_end, cfl, n, domain, output_every, threshold=threshold)
            entries.append(_scan_entry(amp, n, +1, res, threshold))
            if rarefactive:
                horizon = 2 * entries[-1].t_star if entries[-1].t_star is not None else t_end
                rare_spec = replace(comp_spec, direction=tuple(-np.asarray(comp_spec.direction)))
                res_r = run(rare_spec, params, horizon, cfl, n, domain, output_every,
                            threshold=threshold)
                entries.append(_scan_entry(amp, n, -1, res_r, threshold))
    return ScanReport(entries, threshold, params)


def _scan_entry(amp, n, sign, res: RunResult, threshold) -> ScanEntry:
    d = res.diagnostics
    t = np.asarray(d.t)
    g = np.asarray(d.max_ux)
    ratio = g / g[0] if g[0] > 0 else np.zeros_like(g)
    t_star = res.threshold_time if res.status == "threshold" else (
        res.breakdown_time if res.status == "breakdown" else None)
    k = int(np.argmax(ratio))
    r2 = tz = None
    if t_star is not None:
        r2, tz = inverse_gradient_fit(t, g, t_star)
    pr2, ptz = inverse_gradient_fit(t, g, t[k])
    return ScanEntry(amp, n, sign, t_star, res.status, float(ratio[k]), float(t[k]), r2, tz,
                     pr2, ptz, t, ratio)
