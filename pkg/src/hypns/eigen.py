"""Quasilinear flux matrix, characteristic quartic and strict hyperbolicity.

In the variables ``(v, u, theta, q, S)`` the system reads
``U_t + A(U) U_x = g(U)``.  The characteristic polynomial factors as
``lambda * Pi(lambda)`` with ``Pi`` a quartic whose roots are bracketed by
``{-inf, -c0, 0, c0, +inf}`` near equilibrium.
"""
from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .eos import (EQUILIBRIUM, AdmissibilityError, PhysicalParams, ThermoState,
                  thermo_partials)

__all__ = [
    "HyperbolicityError",
    "NotStrictlyHyperbolicError",
    "CertificateError",
    "FluxSystem",
    "QuarticCoeffs",
    "Spectrum",
    "SweepReport",
    "assemble_flux",
    "quartic_coeffs",
    "char_quartic",
    "solve_quartic",
    "companion_roots",
    "spectrum",
    "equilibrium_eigenvector",
    "hyperbolicity_sweep",
]

DEFAULT_DELTA = 1e-2
RESIDUAL_TOL = 1e-10
INTERLACE_SLACK = 1e-12


class HyperbolicityError(ArithmeticError):
    """``c0^2 <= 0``: the reference speed is not real."""


class NotStrictlyHyperbolicError(HyperbolicityError):
    """The quartic factor has a complex pair of roots."""


class CertificateError(HyperbolicityError):
    """Eigenvalues exist but violate the interlacing with ``+-c0``."""

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


@dataclass(frozen=True)
class FluxSystem:
    matrix: np.ndarray
    source: np.ndarray


@dataclass(frozen=True)
class QuarticCoeffs:
    """``Pi(lam) = lam^4 + a lam^3 + b lam^2 + c lam + d`` and the speed ``c0``."""

    a: float
    b: float
    c: float
    d: float
    c0: float

    def as_poly(self) -> np.ndarray:
        return np.array([1.0, self.a, self.b, self.c, self.d])


@dataclass(frozen=True)
class Spectrum:
    lambdas: np.ndarray           # ascending, lambdas[2] == 0 exactly
    right_vectors: np.ndarray     # column k pairs with lambdas[k]
    c0: float
    residuals: np.ndarray = field(default=None)

    @property
    def interlaced(self) -> np.ndarray:
        """``(l1, -c0, l2, l3, l4, c0, l5)``."""
        l1, l2, l3, l4, l5 = self.lambdas
        return np.array([l1, -self.c0, l2, l3, l4, self.c0, l5])

    @property
    def gap(self) -> float:
        return float(np.min(np.diff(self.interlaced)))


def assemble_flux(state: ThermoState, params: PhysicalParams) -> FluxSystem:
    d = thermo_partials(state, params)
    v, theta, q, s = state.v, state.theta, state.q, state.s_stress
    e_th = d.e_theta
    if not e_th > 0:
        raise HyperbolicityError(f"e_theta = {e_th!r} is not positive")
    A = np.array([
        [0.0, -1.0, 0.0, 0.0, 0.0],
        [d.p_v, 0.0, d.p_theta, d.p_q, d.p_S - 1.0],
        [0.0, theta * d.p_theta / e_th, -2 * q / (theta * e_th), 1 / e_th, 0.0],
        [0.0, 0.0, params.kappa / (params.tau1 * v), 0.0, 0.0],
        [0.0, -params.mu / (params.tau2 * v), 0.0, 0.0, 0.0],
    ], dtype=float)
    g = np.array([
        0.0,
        0.0,
        2 * v * q**2 / (params.kappa * theta * e_th) + v * s**2 / (params.mu * e_th),
        -q / params.tau1,
        -s / params.tau2,
    ], dtype=float)
    return FluxSystem(A, g)


def quartic_coeffs(state: ThermoState, params: PhysicalParams) -> QuarticCoeffs:
    d = thermo_partials(state, params)
    v, theta, q = state.v, state.theta, state.q
    c0sq = params.mu * (1 - d.p_S) / (params.tau2 * v) - d.p_v
    if not c0sq > 0:
        raise HyperbolicityError(f"loss of hyperbolicity: c0^2 = {c0sq!r}")
    if not d.e_theta > 0:
        raise HyperbolicityError(f"e_theta = {d.e_theta!r} is not positive")
    k_over = params.kappa / (params.tau1 * v * d.e_theta)
    a = 2 * q / (theta * d.e_theta)
    b = -(c0sq + k_over + theta * d.p_theta**2 / d.e_theta)
    c = -(a * c0sq + k_over * theta * d.p_theta * d.p_q)
    dd = k_over * c0sq
    return QuarticCoeffs(float(a), float(b), float(c), float(dd), float(np.sqrt(c0sq)))


def char_quartic(coeffs: QuarticCoeffs, lam):
    a, b, c, d = coeffs.a, coeffs.b, coeffs.c, coeffs.d
    return (((lam + a) * lam + b) * lam + c) * lam + d


def _root_bound(coeffs: QuarticCoeffs) -> float:
    # Fujiwara: every root satisfies |lam| <= 2 max |a_k|^(1/k), last term halved
    a, b, c, d = coeffs.a, coeffs.b, coeffs.c, coeffs.d
    return 2.0 * max(abs(a), abs(b) ** 0.5, abs(c) ** (1 / 3), (abs(d) / 2) ** 0.25)


def companion_roots(coeffs: QuarticCoeffs) -> np.ndarray:
    """All four roots (complex) from the companion matrix eigenvalues."""
    a, b, c, d = coeffs.a, coeffs.b, coeffs.c, coeffs.d
    C = np.zeros((4, 4))
    C[0, :] = [-a, -b, -c, -d]
    C[1, 0] = C[2, 1] = C[3, 2] = 1.0
    return np.linalg.eigvals(C)


def _polish(coeffs, x):
    a, b, c = coeffs.a, coeffs.b, coeffs.c
    df = ((4 * x + 3 * a) * x + 2 * b) * x + c
    return x - char_quartic(coeffs, x) / df if df != 0 else x


def solve_quartic(coeffs: QuarticCoeffs) -> np.ndarray:
    """Four real roots of ``Pi`` in ascending order.

    Uses the sign pattern ``Pi(-B) > 0, Pi(-c0) < 0, Pi(0) > 0, Pi(c0) < 0,
    Pi(B) > 0`` (``B`` a root bound) to bracket one root per interval.  When the
    pattern fails the companion-matrix eigenvalues are used instead.
    """
    c0 = coeffs.c0
    B = _root_bound(coeffs) * (1 + 1e-12) + 1e-300
    nodes = [-B, -c0, 0.0, c0, B]
    vals = [char_quartic(coeffs, x) for x in nodes]
    expected = [1, -1, 1, -1, 1]
    if all(np.sign(f) == s for f, s in zip(vals, expected)):
        roots = []
        for lo, hi in zip(nodes[:-1], nodes[1:]):
            x = brentq(lambda t: char_quartic(coeffs, t), lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps)
            x = _polish(coeffs, x)
            roots.append(min(max(x, lo), hi))
        return np.array(roots)
    roots = companion_roots(coeffs)
    scale = max(1.0, np.max(np.abs(roots)))
    if np.any(np.abs(roots.imag) > 1e-9 * scale):
        raise NotStrictlyHyperbolicError(f"complex characteristic pair: {roots}")
    roots = np.sort(roots.real)
    return np.array([_polish(coeffs, x) for x in roots])


def _null_vector(M: np.ndarray) -> np.ndarray:
    _, _, vh = np.linalg.svd(M)
    return vh[-1]


def _normalize(r: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(r) > 1e-12 * np.max(np.abs(r)))
    return r / r[nz[0]]


def spectrum(state: ThermoState, params: PhysicalParams, delta: Optional[float] = None) -> Spectrum:
    """Ordered eigenvalues and right eigenvectors of ``A`` at ``state``.

    If ``delta`` is given the state must lie within that distance of
    equilibrium in ``(v, theta, q, S)``.  Eigenvectors are scaled so the first
    non-negligible component equals one.
    """
    if delta is not None:
        dist = np.linalg.norm([state.v - 1, state.theta - 1, state.q, state.s_stress])
        if dist > delta:
            raise ValueError(f"state at distance {dist:.3g} exceeds smallness radius {delta}")
    coeffs = quartic_coeffs(state, params)
    roots = solve_quartic(coeffs)
    lambdas = np.array([roots[0], roots[1], 0.0, roots[2], roots[3]])
    c0 = coeffs.c0
    slack = INTERLACE_SLACK * c0
    seq = np.array([lambdas[0], -c0, lambdas[1], 0.0, lambdas[3], c0, lambdas[4]])
    if not np.all(np.diff(seq) > slack):
        raise CertificateError(f"hyperbolicity certificate failed at {state}: {seq}", state)
    A = assemble_flux(state, params).matrix
    vecs = np.empty((5, 5))
    res = np.empty(5)
    for k, lam in enumerate(lambdas):
        r = _normalize(_null_vector(A - lam * np.eye(5)))
        vecs[:, k] = r
        res[k] = np.linalg.norm(A @ r - lam * r) / np.linalg.norm(r)
    return Spectrum(lambdas, vecs, c0, res)


def equilibrium_eigenvector(params: PhysicalParams, branch: int = 1) -> np.ndarray:
    """Right eigenvector of ``A`` at equilibrium for ``lam = branch * sqrt(L R)``.

    Returned in the unnormalized closed form
    ``(R(w-L), -lam R(w-L), (gamma-1) R L, R^2 w lam, R^2 z (w-L))``.
    """
    from .invariant import ReducedParams, eval_L

    R, w, z, g = params.gas_const, params.w, params.z, params.gamma
    L = eval_L(ReducedParams(w, z, g))
    lam = branch * np.sqrt(L * R)
    return np.array([R * (w - L), -lam * R * (w - L), (g - 1) * R * L,
                     R**2 * w * lam, R**2 * z * (w - L)])


# ---------------------------------------------------------------------------
# sweep

SWEEP_COLUMNS = ["v", "u", "theta", "q", "S", "lambda1", "lambda2", "lambda3",
                 "lambda4", "lambda5", "c0", "gap", "residual", "passed", "error"]


@dataclass
class SweepReport:
    radius: float
    seed: int
    params: PhysicalParams
    rows: list

    @property
    def n_samples(self) -> int:
        return len(self.rows)

    @property
    def failures(self) -> list:
        return [r for r in self.rows if not r["passed"]]

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def min_gap(self) -> float:
        gaps = [r["gap"] for r in self.rows if r["passed"]]
        return min(gaps) if gaps else float("nan")

    @property
    def max_residual(self) -> float:
        res = [r["residual"] for r in self.rows if r["passed"]]
        return max(res) if res else float("nan")

    def summary(self) -> dict:
        return {"radius": self.radius, "seed": self.seed, "samples": self.n_samples,
                "failures": len(self.failures), "min_gap": self.min_gap,
                "max_residual": self.max_residual, "passed": self.passed}

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow({k: (repr(float(row[k])) if isinstance(row[k], float) else row[k])
                             for k in SWEEP_COLUMNS})
        return buf.getvalue()


def _sample_ball(radius, samples, seed):
    # uniform in the 4-ball of (v-1, theta-1, q, S); u does not enter A
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((samples, 4))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    rad = radius * rng.random(samples) ** 0.25
    return x * rad[:, None]


def _certify_one(offsets, params):
    state = ThermoState(1 + offsets[0], 0.0, 1 + offsets[1], offsets[2], offsets[3])
    row = {"v": state.v, "u": 0.0, "theta": state.theta, "q": state.q, "S": state.s_stress}
    nan = float("nan")
    try:
        sp = spectrum(state, params)
    except (HyperbolicityError, AdmissibilityError, ValueError, ZeroDivisionError) as exc:
        row.update({f"lambda{k}": nan for k in range(1, 6)})
        row.update(c0=nan, gap=nan, residual=nan, passed=False, error=type(exc).__name__)
        return row
    row.update({f"lambda{k + 1}": float(sp.lambdas[k]) for k in range(5)})
    resid = float(np.max(sp.residuals))
    ok = resid < RESIDUAL_TOL
    row.update(c0=float(sp.c0), gap=sp.gap, residual=resid, passed=ok,
               error="" if ok else "residual")
    return row


def _certify_chunk(args):
    chunk, params = args
    return [_certify_one(o, params) for o in chunk]


def hyperbolicity_sweep(radius: float, samples: int, params: PhysicalParams = None,
                        seed: int = 0, workers: int = 1) -> SweepReport:
    """Certify strict hyperbolicity on random states within ``radius`` of equilibrium.

    Failed samples are recorded in the report rather than raised.  The
    sample set depends only on ``seed``; ``workers > 1`` splits it into
    contiguous chunks whose results are concatenated in order.
    """
    if not radius >= 0:
        raise ValueError("radius must be non-negative")
    params = params or PhysicalParams()
    offsets = _sample_ball(radius, samples, seed)
    if workers > 1 and samples > workers:
        chunks = np.array_split(offsets, workers)
        with ProcessPoolExecutor(workers) as pool:
            parts = pool.map(_certify_chunk, [(c, params) for c in chunks])
        rows = [r for part in parts for r in part]
    else:
        rows = [_certify_one(o, params) for o in offsets]
    return SweepReport(radius, seed, params, rows)


def equilibrium_spectrum(params: PhysicalParams = None) -> Spectrum:
    return spectrum(EQUILIBRIUM, params or PhysicalParams())
