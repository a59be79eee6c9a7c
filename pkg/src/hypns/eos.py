"""Relaxed ideal-polytropic equation of state.

Pressure and internal energy carry quadratic corrections in the heat flux
``q`` and the stress ``S``::

    p = R theta / v - tau1 q^2 / (2 kappa theta) - tau2 S^2 / (2 mu)
    e = Cv theta + tau1 v q^2 / (kappa theta) + tau2 v S^2 / (2 mu)

Every function accepts scalars or numpy arrays (broadcast elementwise).
The reference (equilibrium) state is ``(v, u, theta, q, S) = (1, 0, 1, 0, 0)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

__all__ = [
    "AdmissibilityError",
    "RelaxationFloorError",
    "PhysicalParams",
    "ThermoState",
    "ThermoPartials",
    "EQUILIBRIUM",
    "pressure",
    "internal_energy",
    "entropy",
    "entropy_bar",
    "relative_entropy",
    "dissipation_rate",
    "thermo_partials",
    "second_partials",
    "correction_coefficients",
    "gibbs_residual",
    "recover_temperature",
    "CheckResult",
    "random_states",
    "check_suite",
]

GAMMA_MAX = 5.0 / 3.0


class AdmissibilityError(ValueError):
    """Raised for states with non-positive specific volume or temperature."""


class RelaxationFloorError(AdmissibilityError):
    """Internal energy too small to carry the given heat flux (no real temperature)."""


@dataclass(frozen=True)
class PhysicalParams:
    """The seven physical constants of the model.

    ``gamma`` may be omitted; it is then set to ``1 + gas_const / cv``.  When
    given it must agree with that value.
    """

    tau1: float = 1.0
    tau2: float = 1.0
    kappa: float = 1.5
    mu: float = 1.0
    gas_const: float = 1.0
    cv: float = 1.5
    gamma: Optional[float] = field(default=None)

    def __post_init__(self):
        for name in ("tau1", "tau2", "kappa", "mu", "gas_const", "cv"):
            val = getattr(self, name)
            if not np.isfinite(val) or val <= 0:
                raise ValueError(f"{name} must be positive, got {val!r}")
        gamma = 1.0 + self.gas_const / self.cv
        if self.gamma is None:
            object.__setattr__(self, "gamma", gamma)
        elif abs(self.gamma - gamma) > 1e-12 * gamma:
            raise ValueError(
                f"gamma={self.gamma!r} inconsistent with 1 + R/Cv = {gamma!r}")
        if not 1.0 < self.gamma <= GAMMA_MAX * (1 + 1e-14):
            raise ValueError(f"adiabatic index must lie in (1, 5/3], got {self.gamma!r}")

    @classmethod
    def from_reduced(cls, w, z, gamma, gas_const=1.0, tau1=1.0, tau2=1.0):
        """Build parameters realising the reduced pair ``(w, z)`` at a given ``gamma``."""
        cv = gas_const / (gamma - 1.0)
        return cls(tau1=tau1, tau2=tau2, kappa=w * tau1 * cv * gas_const,
                   mu=z * tau2 * gas_const, gas_const=gas_const, cv=cv)

    @property
    def w(self) -> float:
        return self.kappa / (self.tau1 * self.cv * self.gas_const)

    @property
    def z(self) -> float:
        return self.mu / (self.tau2 * self.gas_const)

    def to_dict(self) -> dict:
        return {"tau1": self.tau1, "tau2": self.tau2, "kappa": self.kappa, "mu": self.mu,
                "gas_const": self.gas_const, "cv": self.cv, "gamma": self.gamma}


@dataclass(frozen=True)
class ThermoState:
    """Pointwise state in Lagrangian coordinates; fields may be arrays."""

    v: float = 1.0
    u: float = 0.0
    theta: float = 1.0
    q: float = 0.0
    s_stress: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.v, self.u, self.theta, self.q, self.s_stress], dtype=float)

    @classmethod
    def from_array(cls, arr) -> "ThermoState":
        v, u, theta, q, s = arr
        return cls(v, u, theta, q, s)


EQUILIBRIUM = ThermoState()


@dataclass(frozen=True)
class ThermoPartials:
    p_v: float
    p_theta: float
    p_q: float
    p_S: float
    e_v: float
    e_theta: float
    e_q: float
    e_S: float


def _check(state: ThermoState):
    v = np.asarray(state.v, dtype=float)
    theta = np.asarray(state.theta, dtype=float)
    if np.any(~(v > 0)):
        raise AdmissibilityError(f"specific volume must be positive (min v = {np.min(v)!r})")
    if np.any(~(theta > 0)):
        raise AdmissibilityError(f"temperature must be positive (min theta = {np.min(theta)!r})")
    return v, theta


def pressure(state: ThermoState, params: PhysicalParams):
    v, theta = _check(state)
    q, s = state.q, state.s_stress
    return (params.gas_const * theta / v
            - params.tau1 * q**2 / (2 * params.kappa * theta)
            - params.tau2 * s**2 / (2 * params.mu))


def internal_energy(state: ThermoState, params: PhysicalParams):
    v, theta = _check(state)
    q, s = state.q, state.s_stress
    return (params.cv * theta
            + params.tau1 * v * q**2 / (params.kappa * theta)
            + params.tau2 * v * s**2 / (2 * params.mu))


def entropy(state: ThermoState, params: PhysicalParams):
    """Entropy with the ideal-gas closure ``Cv ln(theta) + R ln(v)``, zero at equilibrium."""
    v, theta = _check(state)
    q = state.q
    return (params.cv * np.log(theta) + params.gas_const * np.log(v)
            + params.tau1 * v * q**2 / (2 * params.kappa * theta**2))


def entropy_bar(v, e, q, s_stress, params: PhysicalParams):
    """Entropy as a function of ``(v, e, q, S)`` through :func:`recover_temperature`."""
    theta = recover_temperature(v, e, q, s_stress, params)
    return entropy(ThermoState(v, 0.0, theta, q, s_stress), params)


def relative_entropy(state: ThermoState, params: PhysicalParams):
    """Convex entropy minus its first-order Taylor expansion at equilibrium.

    Equals ``C_v(theta - 1 - ln theta) + R(v - 1 - ln v) + u^2/2`` plus the
    relaxation terms ``(1 - 1/(2 theta)) tau1 v q^2/(kappa theta) + tau2 v S^2/(2 mu)``.
    """
    v, theta = _check(state)
    R, cv = params.gas_const, params.cv
    u, q, s = state.u, state.q, state.s_stress
    base = cv * (theta - 1 - np.log(theta)) + R * (v - 1 - np.log(v)) + 0.5 * u**2
    return (base
            + (1 - 1 / (2 * theta)) * params.tau1 * v * q**2 / (params.kappa * theta)
            + params.tau2 * v * s**2 / (2 * params.mu))


def dissipation_rate(state: ThermoState, params: PhysicalParams):
    """Entropy production density ``v q^2/(kappa theta^2) + v S^2/(mu theta)``."""
    v, theta = _check(state)
    q, s = state.q, state.s_stress
    return v * q**2 / (params.kappa * theta**2) + v * s**2 / (params.mu * theta)


def thermo_partials(state: ThermoState, params: PhysicalParams) -> ThermoPartials:
    v, theta = _check(state)
    q, s = state.q, state.s_stress
    R, t1, t2, k, mu = params.gas_const, params.tau1, params.tau2, params.kappa, params.mu
    zero = np.zeros_like(v * theta)
    return ThermoPartials(
        p_v=-R * theta / v**2 + zero,
        p_theta=R / v + t1 * q**2 / (2 * k * theta**2),
        p_q=-t1 * q / (k * theta),
        p_S=-t2 * s / mu + zero,
        e_v=t1 * q**2 / (k * theta) + t2 * s**2 / (2 * mu),
        e_theta=params.cv - t1 * v * q**2 / (k * theta**2),
        e_q=2 * t1 * v * q / (k * theta),
        e_S=t2 * v * s / mu,
    )


def second_partials(state: ThermoState, params: PhysicalParams) -> dict:
    """Nonzero-capable second derivatives of ``p`` and ``e`` (keys like ``"p_vtheta"``)."""
    v, theta = _check(state)
    q, s = state.q, state.s_stress
    R, t1, t2, k, mu = params.gas_const, params.tau1, params.tau2, params.kappa, params.mu
    return {
        "p_vv": 2 * R * theta / v**3,
        "p_vtheta": -R / v**2,
        "p_thetatheta": -t1 * q**2 / (k * theta**3),
        "p_qq": -t1 / (k * theta),
        "p_qtheta": t1 * q / (k * theta**2),
        "p_SS": -t2 / mu,
        "e_qq": 2 * t1 * v / (k * theta),
        "e_SS": t2 * v / mu,
        "e_vq": 2 * t1 * q / (k * theta),
        "e_vS": t2 * s / mu,
        "e_thetatheta": 2 * t1 * v * q**2 / (k * theta**3),
        "e_thetaq": -2 * t1 * v * q / (k * theta**2),
        "e_vtheta": -t1 * q**2 / (k * theta**2),
    }


def correction_coefficients(v, theta, params: PhysicalParams):
    """Coefficients ``(a, b, alpha, beta)`` of the quadratic relaxation corrections.

    ``e = e~ + a q^2 + b S^2`` and ``p = p~ + alpha q^2 + beta S^2``.
    """
    a = params.tau1 * v / (params.kappa * theta)
    b = params.tau2 * v / (2 * params.mu) + 0 * theta
    alpha = -params.tau1 / (2 * params.kappa * theta) + 0 * v
    beta = -params.tau2 / (2 * params.mu) + 0 * (v * theta)
    return a, b, alpha, beta


def gibbs_residual(state: ThermoState, params: PhysicalParams):
    """``e_v - (theta p_theta - p)``; vanishes identically for this closure."""
    d = thermo_partials(state, params)
    return d.e_v - (state.theta * d.p_theta - pressure(state, params))


def recover_temperature(v, e, q, s_stress, params: PhysicalParams):
    """Invert the internal energy for temperature.

    Solves ``Cv theta^2 - e_hat theta + tau1 v q^2 / kappa = 0`` with
    ``e_hat = e - tau2 v S^2/(2 mu)`` and returns the larger root, the branch
    that reduces to ``e_hat / Cv`` when ``q = 0``.
    """
    v = np.asarray(v, dtype=float)
    if np.any(~(v > 0)):
        raise AdmissibilityError(f"specific volume must be positive (min v = {np.min(v)!r})")
    cv = params.cv
    e_hat = e - params.tau2 * v * s_stress**2 / (2 * params.mu)
    c = params.tau1 * v * q**2 / params.kappa
    disc = e_hat**2 - 4 * cv * c
    if np.any(~(disc >= 0)) or np.any(~(e_hat > 0)):
        raise RelaxationFloorError("energy below relaxation floor")
    # larger root without cancellation: (e_hat + sqrt(disc)) / (2 Cv)
    theta = (e_hat + np.sqrt(disc)) / (2 * cv)
    if np.any(~(theta > 0)):
        raise AdmissibilityError("recovered temperature is not positive")
    return theta


# ---------------------------------------------------------------------------
# self-checks

@dataclass(frozen=True)
class CheckResult:
    name: str
    error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.error < self.tolerance)

    def to_dict(self) -> dict:
        return {"check": self.name, "error": self.error, "tolerance": self.tolerance,
                "passed": self.passed}


def random_states(n: int, rng: np.random.Generator, params: PhysicalParams) -> ThermoState:
    """Admissible states with ``v, theta`` in ``[1/2, 2]`` and ``e_theta >= 3 Cv / 4``."""
    v = rng.uniform(0.5, 2.0, n)
    theta = rng.uniform(0.5, 2.0, n)
    u = rng.uniform(-1.0, 1.0, n)
    q_max = 0.5 * theta * np.sqrt(params.kappa * params.cv / (params.tau1 * v))
    q = rng.uniform(-1.0, 1.0, n) * q_max
    s = rng.uniform(-1.0, 1.0, n)
    return ThermoState(v, u, theta, q, s)


def _rel(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))))


def check_suite(params: PhysicalParams, samples: int = 10_000, seed: int = 0,
                fd_samples: int = 200, h: float = 1e-5) -> list:
    """Gibbs relation, entropy closure, partials and temperature round trip on random states.

    Derivatives of the entropy are taken through the temperature recovery in
    ``(v, e, q, S)`` variables, so the closure checks exercise the whole chain.
    """
    rng = np.random.default_rng(seed)
    st = random_states(samples, rng, params)
    out = []
    p = pressure(st, params)
    scale = np.abs(st.theta * thermo_partials(st, params).p_theta) + np.abs(p)
    out.append(CheckResult("gibbs", float(np.max(np.abs(gibbs_residual(st, params)) / scale)), 1e-10))

    e = internal_energy(st, params)
    theta_back = recover_temperature(st.v, e, st.q, st.s_stress, params)
    out.append(CheckResult("temperature_roundtrip",
                           float(np.max(np.abs(theta_back - st.theta) / st.theta)), 1e-12))

    k = min(fd_samples, samples)
    v, th, q, s = st.v[:k], st.theta[:k], st.q[:k], st.s_stress[:k]
    sub = ThermoState(v, 0.0, th, q, s)
    e = internal_energy(sub, params)
    pr = pressure(sub, params)

    def sbar(dv=0.0, de=0.0, dq=0.0, ds=0.0):
        return entropy_bar(v + dv, e + de, q + dq, s + ds, params)

    def central(**kw):
        key, = kw
        return (sbar(**{key: kw[key]}) - sbar(**{key: -kw[key]})) / (2 * kw[key])

    out.append(CheckResult("closure_ds_de", _rel(central(de=h), 1 / th), 1e-6))
    out.append(CheckResult("closure_ds_dv", _rel(central(dv=h), pr / th), 1e-6))
    out.append(CheckResult("closure_ds_dq",
                           _rel(central(dq=h), -params.tau1 * v * q / (params.kappa * th**2)), 1e-6))
    out.append(CheckResult("closure_ds_dS",
                           _rel(central(ds=h), -params.tau2 * v * s / (params.mu * th)), 1e-6))

    d = thermo_partials(sub, params)
    for name, var in (("v", "v"), ("theta", "theta"), ("q", "q"), ("S", "s_stress")):
        plus = ThermoState(**{**_fields(sub), var: getattr(sub, var) + h})
        minus = ThermoState(**{**_fields(sub), var: getattr(sub, var) - h})
        fd_p = (pressure(plus, params) - pressure(minus, params)) / (2 * h)
        fd_e = (internal_energy(plus, params) - internal_energy(minus, params)) / (2 * h)
        out.append(CheckResult(f"partial_p_{name}", _rel(fd_p, getattr(d, f"p_{name}")), 1e-6))
        out.append(CheckResult(f"partial_e_{name}", _rel(fd_e, getattr(d, f"e_{name}")), 1e-6))
    return out


def _fields(st: ThermoState) -> dict:
    return {"v": st.v, "u": st.u, "theta": st.theta, "q": st.q, "s_stress": st.s_stress}
