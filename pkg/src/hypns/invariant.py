"""Reduced-parameter algebra of the genuine-nonlinearity coefficient.

Everything here is a function of ``w = kappa / (tau1 Cv R)``,
``z = mu / (tau2 R)`` and ``gamma``.  The coefficient ``R(w, z; gamma)`` is
the (scaled) product of the eigenvalue gradient with the right eigenvector
of the second/fourth characteristic field at equilibrium; the API keeps the
name "Riemann invariant" even though, in the usual terminology, it is the
genuine-nonlinearity factor ``grad(lambda) . r`` rather than a quantity
transported along characteristics.

Functions are vectorized over numpy arrays unless noted.
"""
from __future__ import annotations

import csv
import decimal
import io
import json
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np

__all__ = [
    "ReducedParams",
    "InvariantEval",
    "RootTable",
    "Region",
    "MonotonicityVerdict",
    "CertificateReport",
    "eval_f_g",
    "eval_L",
    "eval_MN",
    "pq_coefficients",
    "eval_PQ",
    "dP_dw",
    "dQ_dw",
    "riemann_invariant",
    "grad_Pi_equilibrium",
    "root_table",
    "root_residuals",
    "riemann_invariant_decimal",
    "refine_ill_conditioned",
    "region_partition",
    "a0",
    "gamma0",
    "z_bounds",
    "classify_monotonicity",
    "sample_Q_monotone",
    "negativity_certificate",
    "DEFAULT_GAMMAS",
]

DEFAULT_GAMMAS = (1.01, 1.2, 1.4, 5.0 / 3.0)
DEGENERATE_REL = 1e-8
# points whose double evaluation loses more than this factor to cancellation
# are re-evaluated in decimal arithmetic
CONDITION_LIMIT = 1e4
EXACT_DIGITS = 50


@dataclass(frozen=True)
class ReducedParams:
    w: float
    z: float
    gamma: float

    def __post_init__(self):
        w, z, g = (np.asarray(x, dtype=float) for x in (self.w, self.z, self.gamma))
        if np.any(~(w > 0)) or np.any(~(z > 0)):
            raise ValueError("w and z must be positive")
        if np.any(~(g > 1)) or np.any(g > 5.0 / 3.0 * (1 + 1e-14)):
            raise ValueError("gamma must lie in (1, 5/3]")

    @classmethod
    def from_physical(cls, params) -> "ReducedParams":
        return cls(params.w, params.z, params.gamma)


def eval_f_g(p: ReducedParams):
    """``f = z + w + gamma`` and ``g = sqrt(f^2 - 4 (z+1) w)`` (evaluated without cancellation)."""
    w, z, gm = p.w, p.z, p.gamma
    f = z + w + gm
    g = np.sqrt((z - w + gm) ** 2 + 4 * w * (gm - 1))
    return f, g


def eval_L(p: ReducedParams):
    """Smaller root of ``x^2 - (z+w+gamma) x + (z+1) w``."""
    f, g = eval_f_g(p)
    return 2 * (p.z + 1) * p.w / (f + g)


def eval_MN(p: ReducedParams):
    w, z, g = p.w, p.z, p.gamma
    M = 2 * (g - 1) * w**2 + (g**2 - 2 * g + 3) * w - g * (g + 1) * (z + g)
    N = 2 * ((g - 1) * z + g) * w - g * (g + 1) * (z + 1)
    return M, N


def pq_coefficients(z, gamma):
    """``(p2, p1, p0), (q2, q1, q0)`` of the cubics ``P`` and ``Q`` in ``w``."""
    g = gamma
    p2 = 6 * (g + 1) * z + 12
    p1 = 6 * (g**2 + 1) * z**2 + 3 * (3 * g**2 + 2 * g + 3) * z + 3 * (g**2 + 3)
    p0 = g * (g + 1) * (2 * z**3 + 3 * (g + 1) * z**2 + 3 * (g + 1) * z + 2 * g)
    q2 = 2 * (g - 1) * z + (8 * g - 3 * g**2 - 3)
    q1 = (2 * g**2 - g + 3) * z + g * (5 - g)
    q0 = g * (g + 1) * (z + g) ** 2
    return (p2, p1, p0), (q2, q1, q0)


def _P(w, z, gamma):
    (p2, p1, p0), _ = pq_coefficients(z, gamma)
    return ((4 * w - p2) * w + p1) * w - p0


def _Q(w, z, gamma):
    _, (q2, q1, q0) = pq_coefficients(z, gamma)
    return ((2 * (gamma - 1) * w - q2) * w + q1) * w - q0


def eval_PQ(p: ReducedParams):
    return _P(p.w, p.z, p.gamma), _Q(p.w, p.z, p.gamma)


def dP_dw(w, z, gamma):
    (p2, p1, _), _ = pq_coefficients(z, gamma)
    return 12 * w**2 - 2 * p2 * w + p1


def dQ_dw(w, z, gamma):
    _, (q2, q1, _) = pq_coefficients(z, gamma)
    return 6 * (gamma - 1) * w**2 - 2 * q2 * w + q1


@dataclass(frozen=True)
class InvariantEval:
    L: float
    f: float
    g: float
    M: float
    N: float
    P: float
    Q: float
    R_a: float
    R_b: float
    R_c: float            # nan where Mg + Q is degenerate
    c_skipped: bool
    lambda_star: float    # sqrt(L), i.e. the equilibrium eigenvalue for gas constant 1

    @property
    def value(self):
        return self.R_a

    @property
    def spread(self):
        """Largest relative disagreement between the available expressions."""
        ref = np.abs(self.R_a)
        d_b = np.abs(self.R_b - self.R_a)
        d_c = np.where(self.c_skipped, 0.0, np.abs(np.nan_to_num(self.R_c) - self.R_a))
        return np.maximum(d_b, d_c) / ref


def riemann_invariant(p: ReducedParams) -> InvariantEval:
    """Evaluate ``R`` three ways: ``ML - wN``, ``(Q - Mg)/2`` and ``-2(gamma-1) w^2 P / (Mg + Q)``."""
    w, gm = p.w, p.gamma
    f, g = eval_f_g(p)
    L = eval_L(p)
    M, N = eval_MN(p)
    P, Q = eval_PQ(p)
    R_a = M * L - w * N
    R_b = 0.5 * (Q - M * g)
    denom = M * g + Q
    skipped = np.abs(denom) < DEGENERATE_REL * (np.abs(M * g) + np.abs(Q))
    with np.errstate(divide="ignore", invalid="ignore"):
        R_c = np.where(skipped, np.nan, -2 * (gm - 1) * w**2 * P / np.where(skipped, 1.0, denom))
    if np.ndim(R_c) == 0:
        R_c, skipped = float(R_c), bool(skipped)
    return InvariantEval(L, f, g, M, N, P, Q, R_a, R_b, R_c, skipped, np.sqrt(L))


def riemann_invariant_decimal(w: float, z: float, gamma: float, digits: int = EXACT_DIGITS):
    """``(R_a, R_b, R_c)`` at one point in ``digits``-digit decimal arithmetic.

    Float inputs convert exactly, so the only error is the final rounding.
    ``R_c`` is ``nan`` when ``Mg + Q`` vanishes at that precision.
    """
    D = decimal.Decimal
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        w, z, gm = D(float(w)), D(float(z)), D(float(gamma))
        f = z + w + gm
        g = ((z - w + gm) ** 2 + 4 * w * (gm - 1)).sqrt()
        L = 2 * (z + 1) * w / (f + g)
        M = 2 * (gm - 1) * w**2 + (gm**2 - 2 * gm + 3) * w - gm * (gm + 1) * (z + gm)
        N = 2 * ((gm - 1) * z + gm) * w - gm * (gm + 1) * (z + 1)
        P = _P(w, z, gm)
        Q = _Q(w, z, gm)
        R_a = M * L - w * N
        R_b = (Q - M * g) / 2
        den = M * g + Q
        R_c = -2 * (gm - 1) * w**2 * P / den if den != 0 else D("nan")
    return float(R_a), float(R_b), float(R_c)


def _condition(e: "InvariantEval", w):
    """Cancellation factors of the three expressions in double precision."""
    with np.errstate(divide="ignore", invalid="ignore"):
        k_a = (np.abs(e.M * e.L) + np.abs(w * e.N)) / np.abs(e.R_a)
        k_b = 2 * (np.abs(e.Q) + np.abs(e.M * e.g)) / np.abs(2 * e.R_b)
        k_c = (np.abs(e.M * e.g) + np.abs(e.Q)) / np.abs(e.M * e.g + e.Q)
    k_c = np.where(e.c_skipped, 0.0, k_c)
    return np.fmax(np.fmax(k_a, k_b), k_c)


def refine_ill_conditioned(p: ReducedParams, e: "InvariantEval", limit: float = CONDITION_LIMIT):
    """Replace ``R_a, R_b, R_c`` by decimal values where cancellation exceeds ``limit``.

    Returns the updated evaluation and the boolean mask of refined points.
    """
    W, Z, G = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (p.w, p.z, p.gamma)))
    mask = _condition(e, W) > limit
    if not np.any(mask):
        return e, mask
    R_a, R_b, R_c = (np.array(x, dtype=float, copy=True) for x in (e.R_a, e.R_b, e.R_c))
    for idx in zip(*np.nonzero(mask)):
        ra, rb, rc = riemann_invariant_decimal(W[idx], Z[idx], G[idx])
        R_a[idx], R_b[idx] = ra, rb
        if not np.asarray(e.c_skipped)[idx]:
            R_c[idx] = rc
    return replace(e, R_a=R_a, R_b=R_b, R_c=R_c), mask


def grad_Pi_equilibrium(p: ReducedParams, gas_const: float = 1.0, branch: int = 1):
    """``(dPi/dv, dPi/dtheta, dPi/dq, dPi/dS)`` at equilibrium and ``lam = branch sqrt(L R)``."""
    w, z, g, R = p.w, p.z, p.gamma, gas_const
    L = eval_L(p)
    lam = branch * np.sqrt(L * R)
    return np.array([
        R**2 * ((z + w + 2 * g) * L - (2 * z + 3) * w),
        R**2 * (w - g * L),
        (g - 1) * (2 * L - 2 * z - 1) * lam,
        R * (w - L),
    ])


# ---------------------------------------------------------------------------
# roots in w for fixed (z, gamma)

@dataclass(frozen=True)
class RootTable:
    z: float
    gamma: float
    w_N: float
    w_M: float
    w_P: float
    w_Q: float

    @property
    def ordered(self):
        return (0 < self.w_N) & (self.w_N < self.w_M) & (self.w_M < self.w_P) & (self.w_P <= self.w_Q)


def _bisect(fun, lo, hi, iters=200):
    """Vectorized bisection; ``fun(lo) < 0 < fun(hi)`` elementwise."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        done = (mid <= lo) | (mid >= hi)
        if np.all(done):
            break
        neg = fun(mid) < 0
        lo = np.where(neg & ~done, mid, lo)
        hi = np.where(~neg & ~done, mid, hi)
    # return the endpoint with the smaller residual
    return np.where(np.abs(fun(lo)) <= np.abs(fun(hi)), lo, hi)


def _upper_bracket(fun, start):
    hi = np.array(start, dtype=float)
    for _ in range(2000):
        neg = fun(hi) <= 0
        if not np.any(neg):
            return hi
        hi = np.where(neg, 2 * hi, hi)
    raise RuntimeError("failed to bracket root")


def _w_M(z, g):
    D1 = (g**2 - 2 * g + 3) ** 2 + 8 * g * (g + 1) * ((g - 1) * z + g * (g - 1))
    # positive root of M as a quadratic in w, written to avoid cancellation
    c = g * (g + 1) * (z + g)
    return 2 * c / (np.sqrt(D1) + (g**2 - 2 * g + 3))


def _w_N(z, g):
    zt = (g - 1) * z + g
    return g * (g + 1) / (2 * (g - 1)) * (zt - 1) / zt


def _w_Q(z, g):
    """Smallest positive root of the cubic ``Q``.

    ``Q(0) < 0`` and ``Q -> +inf``.  If ``Q`` has a local maximum at
    ``w1 > 0`` with ``Q(w1) >= 0`` the smallest root lies in ``(0, w1]``;
    otherwise it lies beyond the local minimum (or anywhere if there are no
    critical points).
    """
    _, (q2, q1, _) = pq_coefficients(z, g)
    a3 = 6 * (g - 1)
    disc = q2**2 - a3 * q1            # quarter discriminant of dQ/dw
    sq = np.sqrt(np.maximum(disc, 0.0))
    w1 = np.where(disc > 0, q1 / (q2 + sq), 0.0)     # smaller critical point (q2 > 0)
    w2 = np.where(disc > 0, (q2 + sq) / a3, 0.0)
    Qw1 = _Q(w1, z, g)
    first_hump = (disc > 0) & (Qw1 >= 0)
    lo = np.where(first_hump, 0.0, np.maximum(w2, 0.0))
    start = np.where(first_hump, w1, np.maximum(2 * w2, 1.0))
    fun = lambda w: _Q(w, z, g)
    hi = np.where(first_hump, w1, _upper_bracket(lambda w: np.where(first_hump, 1.0, fun(w)), start))
    root = _bisect(fun, lo, hi)
    return np.where(first_hump & (Qw1 == 0), w1, root)


def _w_P(z, g):
    fun = lambda w: _P(w, z, g)
    hi = _upper_bracket(fun, np.maximum(_w_M(z, g), 1.0) * np.ones_like(np.asarray(z, dtype=float)))
    return _bisect(fun, np.zeros_like(hi), hi)


def root_table(z, gamma) -> RootTable:
    """Roots ``w_N < w_M < w_P <= w_Q`` for fixed ``(z, gamma)`` (vectorized over ``z``)."""
    z = np.asarray(z, dtype=float)
    g = np.asarray(gamma, dtype=float)
    ReducedParams(1.0, z, g)
    out = RootTable(z, g, _w_N(z, g), _w_M(z, g), _w_P(z, g), _w_Q(z, g))
    if z.ndim == 0 and g.ndim == 0:
        out = RootTable(*(float(x) for x in (out.z, out.gamma, out.w_N, out.w_M, out.w_P, out.w_Q)))
    return out


def root_residuals(table: RootTable) -> dict:
    """``|f(root)|`` over the sum of the absolute values of the terms of ``f``, per root."""
    z, g = table.z, table.gamma
    (p2, p1, p0), (q2, q1, q0) = pq_coefficients(z, g)

    def rel(val, scale):
        return np.abs(val) / scale

    w = table.w_N
    N_terms = (2 * ((g - 1) * z + g) * w, g * (g + 1) * (z + 1))
    w_m = table.w_M
    M_terms = (2 * (g - 1) * w_m**2, (g**2 - 2 * g + 3) * w_m, g * (g + 1) * (z + g))
    w_p = table.w_P
    P_terms = (4 * w_p**3, p2 * w_p**2, p1 * w_p, p0)
    w_q = table.w_Q
    Q_terms = (2 * (g - 1) * w_q**3, q2 * w_q**2, q1 * w_q, q0)
    return {
        "w_N": rel(N_terms[0] - N_terms[1], sum(np.abs(t) for t in N_terms)),
        "w_M": rel(M_terms[0] + M_terms[1] - M_terms[2], sum(np.abs(t) for t in M_terms)),
        "w_P": rel(_P(w_p, z, g), sum(np.abs(t) for t in P_terms)),
        "w_Q": rel(_Q(w_q, z, g), sum(np.abs(t) for t in Q_terms)),
    }


class Region(NamedTuple):
    label: str        # "(0,w_N]", "(w_N,w_M]", "I-", "I+"
    expression: str   # which expression of R certifies the sign there


REGIONS = (Region("(0,w_N]", "c"), Region("(w_N,w_M]", "a"), Region("I-", "b"), Region("I+", "c"))


def region_index(z, gamma, w, table: RootTable = None):
    """Vectorized region index 0..3 into :data:`REGIONS`."""
    table = table or root_table(z, gamma)
    w = np.asarray(w, dtype=float)
    Q = _Q(w, z, gamma)
    return np.where(w <= table.w_N, 0,
                    np.where(w <= table.w_M, 1, np.where(Q <= 0, 2, 3)))


def region_partition(z: float, gamma: float, w: float) -> Region:
    return REGIONS[int(region_index(z, gamma, w))]


# ---------------------------------------------------------------------------
# monotonicity of Q in w

def a0(gamma):
    g = gamma
    return 9 * g**4 - 42 * g**3 + 46 * g**2 - 18 * g + 9


def a1(gamma):
    return 12 * gamma**2 - 19 * gamma + 15


def gamma0(tol: float = 1e-15) -> float:
    """Unique zero of ``a0`` on ``(1, 5/3]`` by bisection."""
    lo, hi = 1.0, 5.0 / 3.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if a0(mid) > 0:
            lo = mid
        else:
            hi = mid
        if mid in (lo, hi) and hi - lo <= 2 * np.spacing(mid):
            break
    return lo if abs(a0(lo)) < abs(a0(hi)) else hi


def z_bounds(gamma):
    """``(z_minus, z_plus)``: roots of the discriminant of ``dQ/dw`` viewed in ``z``."""
    g = gamma
    root = np.sqrt(3 * (36 * g**4 - 96 * g**3 + 179 * g**2 - 166 * g + 63))
    return (a1(g) - root) / (4 * (g - 1)), (a1(g) + root) / (4 * (g - 1))


def d3(gamma):
    g = gamma
    return 12 * (g - 1) ** 2 * (36 * g**4 - 96 * g**3 + 179 * g**2 - 166 * g + 63)


@dataclass(frozen=True)
class MonotonicityVerdict:
    gamma: float
    z: float
    monotone: bool
    condition: str        # "a", "b" or "" when not monotone
    gamma0: float
    z_minus: float
    z_plus: float


_GAMMA0 = None


def classify_monotonicity(gamma: float, z: float) -> MonotonicityVerdict:
    """Closed-form verdict on whether ``Q(., z)`` increases on ``(0, inf)``."""
    global _GAMMA0
    if _GAMMA0 is None:
        _GAMMA0 = gamma0()
    ReducedParams(1.0, z, gamma)
    zm, zp = z_bounds(gamma)
    if gamma < _GAMMA0:
        monotone, cond = bool(zm <= z <= zp), "a"
    else:
        monotone, cond = bool(z <= zp), "b"
    return MonotonicityVerdict(float(gamma), float(z), monotone, cond if monotone else "",
                           _GAMMA0, float(zm), float(zp))


def sample_Q_monotone(gamma: float, z: float, w_max: float, n: int = 4001) -> bool:
    """Sign-sampling oracle: ``dQ/dw >= 0`` on ``n`` points of ``(0, w_max]``.

    The sample set includes the minimizer of the quadratic ``dQ/dw`` when it
    falls inside the window.
    """
    w = np.linspace(w_max / n, w_max, n)
    _, (q2, _, _) = pq_coefficients(z, gamma)
    w_star = q2 / (6 * (gamma - 1))
    if 0 < w_star <= w_max:
        w = np.append(w, w_star)
    return bool(np.all(dQ_dw(w, z, gamma) >= 0))


# ---------------------------------------------------------------------------
# certificate

CERT_COLUMNS = ["gamma", "z", "w", "M", "N", "P", "Q", "L", "R_a", "R_b", "R_c", "region"]


@dataclass
class CertificateReport:
    """Floating-point (not interval) certificate that ``R < 0`` on a grid."""

    gammas: np.ndarray
    z: np.ndarray
    w: np.ndarray
    evals: list           # one InvariantEval (arrays shaped (nz, nw)) per gamma
    regions: list         # region index arrays per gamma
    margins: list         # rounding-error margin per point
    refined: list         # points re-evaluated in decimal arithmetic

    @property
    def max_R(self) -> float:
        return float(max(np.max(e.R_a) for e in self.evals))

    @property
    def argmax(self) -> dict:
        best = None
        for g, e in zip(self.gammas, self.evals):
            k = np.unravel_index(np.argmax(e.R_a), e.R_a.shape)
            val = float(e.R_a[k])
            if best is None or val > best["R"]:
                best = {"gamma": float(g), "z": float(self.z[k[0]]), "w": float(self.w[k[1]]), "R": val}
        return best

    @property
    def max_spread(self) -> float:
        return float(max(np.max(e.spread) for e in self.evals))

    @property
    def n_skipped(self) -> int:
        return int(sum(np.count_nonzero(e.c_skipped) for e in self.evals))

    @property
    def margin_ok(self) -> bool:
        """Every ``R`` is below ``-margin``: negative beyond rounding error."""
        return all(bool(np.all(e.R_a < -m)) for e, m in zip(self.evals, self.margins))

    @property
    def failures(self) -> list:
        out = []
        for g, e in zip(self.gammas, self.evals):
            for i, j in zip(*np.nonzero(e.R_a >= 0)):
                out.append({"gamma": float(g), "z": float(self.z[i]), "w": float(self.w[j]),
                            "R": float(e.R_a[i, j])})
        return out

    @property
    def passed(self) -> bool:
        return self.max_R < 0 and self.margin_ok

    def region_counts(self) -> dict:
        counts = {r.label: 0 for r in REGIONS}
        for reg in self.regions:
            for k, r in enumerate(REGIONS):
                counts[r.label] += int(np.count_nonzero(reg == k))
        return counts

    def summary(self) -> dict:
        return {
            "status": "PASS" if self.passed else "FAILED",
            "max_R": self.max_R,
            "argmax": self.argmax,
            "max_spread": self.max_spread,
            "skipped_expression_c": self.n_skipped,
            "refined_points": int(sum(np.count_nonzero(m) for m in self.refined)),
            "margin_ok": self.margin_ok,
            "region_counts": self.region_counts(),
            "expressions": {r.label: r.expression for r in REGIONS},
            "grid": {"gammas": [float(g) for g in self.gammas], "n_z": int(self.z.size),
                     "n_w": int(self.w.size), "z_range": [float(self.z[0]), float(self.z[-1])],
                     "w_range": [float(self.w[0]), float(self.w[-1])]},
            "rigor": "floating-point evaluation, not interval arithmetic",
            "failures": self.failures[:20],
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CERT_COLUMNS)
        for g, e, reg in zip(self.gammas, self.evals, self.regions):
            for i, zz in enumerate(self.z):
                for j, ww in enumerate(self.w):
                    writer.writerow([repr(float(g)), repr(float(zz)), repr(float(ww))] + [
                        repr(float(getattr(e, k)[i, j])) for k in ("M", "N", "P", "Q", "L", "R_a", "R_b")
                    ] + [repr(float(e.R_c[i, j])), REGIONS[reg[i, j]].label])
        return buf.getvalue()


def negativity_certificate(w_range=(1e-3, 1e3), z_range=(1e-3, 1e3), n_w: int = 200,
                           n_z: int = 200, gammas: Sequence[float] = DEFAULT_GAMMAS) -> CertificateReport:
    """Evaluate ``R`` on a log-spaced ``(z, w)`` grid for each ``gamma``.

    The margin at each point is a bound on the rounding error of ``ML - wN``:
    ``64 eps (|M L| + |w N|)``.  Points where any of the three expressions
    cancels by more than ``CONDITION_LIMIT`` are re-evaluated with
    ``riemann_invariant_decimal``; their margin is the final rounding only.
    """
    if n_w < 1 or n_z < 1:
        raise ValueError("grid must be non-empty")
    w = np.geomspace(*w_range, n_w)
    z = np.geomspace(*z_range, n_z)
    Z, W = np.meshgrid(z, w, indexing="ij")
    evals, regions, margins, refined = [], [], [], []
    eps = np.finfo(float).eps
    for g in gammas:
        p = ReducedParams(W, Z, g)
        e = riemann_invariant(p)
        margin = 64 * eps * (np.abs(e.M * e.L) + np.abs(W * e.N))
        e, mask = refine_ill_conditioned(p, e)
        margin = np.where(mask, 4 * eps * np.abs(e.R_a), margin)
        refined.append(mask)
        evals.append(e)
        table = root_table(z, g)
        tab2 = RootTable(Z, g, table.w_N[:, None], table.w_M[:, None], table.w_P[:, None], table.w_Q[:, None])
        regions.append(region_index(Z, g, W, tab2))
        margins.append(margin)
    return CertificateReport(np.asarray(gammas, dtype=float), z, w, evals, regions, margins, refined)
