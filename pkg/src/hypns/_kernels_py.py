"""Pure numpy implementation of the finite-volume hot loop.

Mirrors ``_kernels.pyx`` exactly; selected at import when the compiled
extension is missing.  ``consts`` is the tuple
``(tau1, tau2, kappa, mu, gas_const, cv)``.  Cell arrays hold interior cells
only; two ghost cells per side are frozen at equilibrium.
"""
import numpy as np

NGHOST = 2
NEWTON_ITERS = 60


def temperature(v, E, u, q, s, consts):
    tau1, tau2, kappa, mu, R, cv = consts
    e_hat = E - 0.5 * u * u - tau2 * v * s * s / (2.0 * mu)
    disc = e_hat * e_hat - 4.0 * cv * tau1 * v * q * q / kappa
    theta = np.full_like(v, np.nan)
    ok = (disc >= 0.0) & (e_hat > 0.0) & (v > 0.0)
    theta[ok] = (e_hat[ok] + np.sqrt(disc[ok])) / (2.0 * cv)
    return theta


def quartic(v, theta, q, s, consts):
    """Coefficients ``(a, b, c, d, c0sq)`` of the non-trivial characteristic factor."""
    tau1, tau2, kappa, mu, R, cv = consts
    p_v = -R * theta / (v * v)
    p_th = R / v + tau1 * q * q / (2.0 * kappa * theta * theta)
    p_q = -tau1 * q / (kappa * theta)
    p_s = -tau2 * s / mu
    e_th = cv - tau1 * v * q * q / (kappa * theta * theta)
    c0sq = mu * (1.0 - p_s) / (tau2 * v) - p_v
    k_over = kappa / (tau1 * v * e_th)
    a = 2.0 * q / (theta * e_th)
    b = -(c0sq + k_over + theta * p_th * p_th / e_th)
    c = -(a * c0sq + k_over * theta * p_th * p_q)
    d = k_over * c0sq
    return a, b, c, d, c0sq


def max_speed(v, theta, q, s, consts):
    """Largest real root of the quartic factor, per cell.

    Newton iteration started above the largest root decreases monotonically
    onto it, since every inflection point lies below the largest root.  Cells where it does not settle
    keep the (larger, still valid) bound.
    """
    a, b, c, d, _ = quartic(v, theta, q, s, consts)
    bound = 2.0 * np.maximum.reduce([np.abs(a), np.sqrt(np.abs(b)),
                                     np.cbrt(np.abs(c)), np.sqrt(np.sqrt(np.abs(d) / 2.0))])
    # Laguerre-Samuelson bound, valid when all roots are real; used as the
    # starting point when it is tighter and the quartic is positive there
    spread = np.sqrt(np.maximum(0.75 * a * a - 2.0 * b, 0.0))
    ls = -0.25 * a + 0.5 * np.sqrt(3.0) * spread
    f_ls = (((ls + a) * ls + b) * ls + c) * ls + d
    lam = np.where((ls < bound) & (f_ls >= 0.0), ls, bound)
    for _ in range(NEWTON_ITERS):
        f = (((lam + a) * lam + b) * lam + c) * lam + d
        df = ((4.0 * lam + 3.0 * a) * lam + 2.0 * b) * lam + c
        step = np.where(df > 0.0, f / np.where(df > 0.0, df, 1.0), 0.0)
        lam_new = lam - step
        if np.all(np.abs(step) <= 1e-15 * np.abs(lam)):
            lam = lam_new
            break
        lam = lam_new
    bad = ~np.isfinite(lam) | (lam > bound) | (lam <= 0.0)
    lam = np.where(bad, bound, lam)
    return lam


def _pad(x, fill):
    return np.concatenate(([fill, fill], x, [fill, fill]))


def _minmod(a, b):
    return np.where(a * b > 0.0, np.where(np.abs(a) < np.abs(b), a, b), 0.0)


def _pressure(v, theta, q, s, consts):
    tau1, tau2, kappa, mu, R, cv = consts
    return R * theta / v - tau1 * q * q / (2.0 * kappa * theta) - tau2 * s * s / (2.0 * mu)


def _energy(v, theta, q, s, consts):
    tau1, tau2, kappa, mu, R, cv = consts
    return cv * theta + tau1 * v * q * q / (kappa * theta) + tau2 * v * s * s / (2.0 * mu)


def rates(v, u, E, q, s, dx, consts, eq_speed):
    """Semi-discrete rates for one stage.

    Returns ``(dv, du, dE, q_target, s_target, theta, speed)``: time
    derivatives of the conserved fields, the relaxation targets
    ``-kappa theta_x / v`` and ``mu u_x / v`` (centered differences), the
    recovered temperature and the per-cell largest characteristic speed.
    Raises ``FloatingPointError`` with the offending cell index on an
    inadmissible cell.
    """
    tau1, tau2, kappa, mu, R, cv = consts
    theta = temperature(v, E, u, q, s, consts)
    bad = np.flatnonzero(~(theta > 0.0) | ~(v > 0.0))
    if bad.size:
        raise FloatingPointError(int(bad[0]))
    speed = max_speed(v, theta, q, s, consts)

    prims = [_pad(v, 1.0), _pad(u, 0.0), _pad(theta, 1.0), _pad(q, 0.0), _pad(s, 0.0)]
    left, right = [], []
    for w in prims:
        dl = w[1:-1] - w[:-2]
        dr = w[2:] - w[1:-1]
        slope = _minmod(dl, dr)            # cells -1 .. N
        wc = w[1:-1]
        left.append((wc + 0.5 * slope)[:-1])   # state left of faces -1/2 .. N-1/2
        right.append((wc - 0.5 * slope)[1:])
    sp = np.concatenate(([eq_speed], speed, [eq_speed]))
    a_face = np.maximum(sp[:-1], sp[1:])

    def flux_and_state(vv, uu, tt, qq, ss):
        p = _pressure(vv, tt, qq, ss, consts)
        en = _energy(vv, tt, qq, ss, consts) + 0.5 * uu * uu
        return (-uu, p - ss, uu * (p - ss) + qq), (vv, uu, en)

    fl, ul = flux_and_state(*left)
    fr, ur = flux_and_state(*right)
    out = []
    for k in range(3):
        fhat = 0.5 * (fl[k] + fr[k]) - 0.5 * a_face * (ur[k] - ul[k])
        out.append(-(fhat[1:] - fhat[:-1]) / dx)

    thp, up = prims[2], prims[1]
    theta_x = (thp[3:-1] - thp[1:-3]) / (2.0 * dx)
    u_x = (up[3:-1] - up[1:-3]) / (2.0 * dx)
    q_target = -kappa * theta_x / v
    s_target = mu * u_x / v
    return out[0], out[1], out[2], q_target, s_target, theta, speed
