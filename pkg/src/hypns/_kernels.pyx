# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled finite-volume hot loop; same interface and arithmetic as ``_kernels_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, cbrt, fabs, fmax, isfinite, NAN

cnp.import_array()

DEF NGHOST = 2
DEF NEWTON_ITERS = 60


cdef struct Consts:
    double tau1, tau2, kappa, mu, R, cv


cdef inline Consts _unpack(consts):
    cdef Consts c
    c.tau1, c.tau2, c.kappa, c.mu, c.R, c.cv = [float(x) for x in consts]
    return c


cdef inline double _theta(double v, double E, double u, double q, double s, Consts c) nogil:
    cdef double e_hat = E - 0.5 * u * u - c.tau2 * v * s * s / (2.0 * c.mu)
    cdef double disc = e_hat * e_hat - 4.0 * c.cv * c.tau1 * v * q * q / c.kappa
    if disc >= 0.0 and e_hat > 0.0 and v > 0.0:
        return (e_hat + sqrt(disc)) / (2.0 * c.cv)
    return NAN


cdef inline double _speed(double v, double theta, double q, double s, Consts c) nogil:
    cdef double p_v = -c.R * theta / (v * v)
    cdef double p_th = c.R / v + c.tau1 * q * q / (2.0 * c.kappa * theta * theta)
    cdef double p_q = -c.tau1 * q / (c.kappa * theta)
    cdef double p_s = -c.tau2 * s / c.mu
    cdef double e_th = c.cv - c.tau1 * v * q * q / (c.kappa * theta * theta)
    cdef double c0sq = c.mu * (1.0 - p_s) / (c.tau2 * v) - p_v
    cdef double k_over = c.kappa / (c.tau1 * v * e_th)
    cdef double a = 2.0 * q / (theta * e_th)
    cdef double b = -(c0sq + k_over + theta * p_th * p_th / e_th)
    cdef double cc = -(a * c0sq + k_over * theta * p_th * p_q)
    cdef double d = k_over * c0sq
    cdef double bound = 2.0 * fmax(fmax(fabs(a), sqrt(fabs(b))),
                                   fmax(cbrt(fabs(cc)), sqrt(sqrt(fabs(d) / 2.0))))
    cdef double spread = sqrt(fmax(0.75 * a * a - 2.0 * b, 0.0))
    cdef double ls = -0.25 * a + 0.5 * sqrt(3.0) * spread
    cdef double f = (((ls + a) * ls + b) * ls + cc) * ls + d
    cdef double lam = ls if (ls < bound and f >= 0.0) else bound
    cdef double df, step
    cdef int it
    for it in range(NEWTON_ITERS):
        f = (((lam + a) * lam + b) * lam + cc) * lam + d
        df = ((4.0 * lam + 3.0 * a) * lam + 2.0 * b) * lam + cc
        step = f / df if df > 0.0 else 0.0
        lam = lam - step
        if fabs(step) <= 1e-15 * fabs(lam + step):
            break
    if not isfinite(lam) or lam > bound or lam <= 0.0:
        return bound
    return lam


def temperature(v, E, u, q, s, consts):
    cdef Consts c = _unpack(consts)
    cdef double[::1] vv = np.ascontiguousarray(v, dtype=float)
    cdef double[::1] EE = np.ascontiguousarray(E, dtype=float)
    cdef double[::1] uu = np.ascontiguousarray(u, dtype=float)
    cdef double[::1] qq = np.ascontiguousarray(q, dtype=float)
    cdef double[::1] ss = np.ascontiguousarray(s, dtype=float)
    cdef Py_ssize_t n = vv.shape[0], i
    out = np.empty(n)
    cdef double[::1] th = out
    for i in range(n):
        th[i] = _theta(vv[i], EE[i], uu[i], qq[i], ss[i], c)
    return out


def max_speed(v, theta, q, s, consts):
    cdef Consts c = _unpack(consts)
    cdef double[::1] vv = np.ascontiguousarray(v, dtype=float)
    cdef double[::1] tt = np.ascontiguousarray(theta, dtype=float)
    cdef double[::1] qq = np.ascontiguousarray(q, dtype=float)
    cdef double[::1] ss = np.ascontiguousarray(s, dtype=float)
    cdef Py_ssize_t n = vv.shape[0], i
    out = np.empty(n)
    cdef double[::1] sp = out
    for i in range(n):
        sp[i] = _speed(vv[i], tt[i], qq[i], ss[i], c)
    return out


cdef inline double _minmod(double a, double b) nogil:
    if a * b > 0.0:
        return a if fabs(a) < fabs(b) else b
    return 0.0


cdef inline void _flux(double v, double u, double th, double q, double s, Consts c,
                       double* f, double* w) nogil:
    cdef double p = c.R * th / v - c.tau1 * q * q / (2.0 * c.kappa * th) - c.tau2 * s * s / (2.0 * c.mu)
    cdef double en = (c.cv * th + c.tau1 * v * q * q / (c.kappa * th)
                      + c.tau2 * v * s * s / (2.0 * c.mu) + 0.5 * u * u)
    f[0] = -u
    f[1] = p - s
    f[2] = u * (p - s) + q
    w[0] = v
    w[1] = u
    w[2] = en


def rates(v, u, E, q, s, double dx, consts, double eq_speed):
    """See ``_kernels_py.rates``."""
    cdef Consts c = _unpack(consts)
    cdef double[::1] vv = np.ascontiguousarray(v, dtype=float)
    cdef double[::1] uu = np.ascontiguousarray(u, dtype=float)
    cdef double[::1] EE = np.ascontiguousarray(E, dtype=float)
    cdef double[::1] qq = np.ascontiguousarray(q, dtype=float)
    cdef double[::1] ss = np.ascontiguousarray(s, dtype=float)
    cdef Py_ssize_t n = vv.shape[0], i, k, j
    cdef Py_ssize_t m = n + 2 * NGHOST

    theta_a = np.empty(n)
    speed_a = np.empty(n)
    cdef double[::1] th = theta_a
    cdef double[::1] sp = speed_a
    for i in range(n):
        th[i] = _theta(vv[i], EE[i], uu[i], qq[i], ss[i], c)
        if not (th[i] > 0.0) or not (vv[i] > 0.0):
            raise FloatingPointError(int(i))
        sp[i] = _speed(vv[i], th[i], qq[i], ss[i], c)

    # padded primitives, row-major (field, cell)
    prim_a = np.empty((5, m))
    cdef double[:, ::1] P = prim_a
    cdef double fills[5]
    fills[0] = 1.0
    fills[1] = 0.0
    fills[2] = 1.0
    fills[3] = 0.0
    fills[4] = 0.0
    for k in range(5):
        for j in range(NGHOST):
            P[k, j] = fills[k]
            P[k, m - 1 - j] = fills[k]
    for i in range(n):
        P[0, i + NGHOST] = vv[i]
        P[1, i + NGHOST] = uu[i]
        P[2, i + NGHOST] = th[i]
        P[3, i + NGHOST] = qq[i]
        P[4, i + NGHOST] = ss[i]

    # faces -1/2 .. n-1/2 between padded cells (j, j+1), j = 1 .. n+1
    fhat_a = np.empty((3, n + 1))
    cdef double[:, ::1] FH = fhat_a
    cdef double L[5]
    cdef double Rr[5]
    cdef double fl[3]
    cdef double fr[3]
    cdef double wl[3]
    cdef double wr[3]
    cdef double sl, sr, a_face
    for i in range(n + 1):
        j = i + 1
        for k in range(5):
            L[k] = P[k, j] + 0.5 * _minmod(P[k, j] - P[k, j - 1], P[k, j + 1] - P[k, j])
            Rr[k] = P[k, j + 1] - 0.5 * _minmod(P[k, j + 1] - P[k, j], P[k, j + 2] - P[k, j + 1])
        sl = sp[i - 1] if i >= 1 else eq_speed
        sr = sp[i] if i < n else eq_speed
        a_face = sl if sl > sr else sr
        _flux(L[0], L[1], L[2], L[3], L[4], c, fl, wl)
        _flux(Rr[0], Rr[1], Rr[2], Rr[3], Rr[4], c, fr, wr)
        for k in range(3):
            FH[k, i] = 0.5 * (fl[k] + fr[k]) - 0.5 * a_face * (wr[k] - wl[k])

    dv_a = np.empty(n)
    du_a = np.empty(n)
    dE_a = np.empty(n)
    qt_a = np.empty(n)
    st_a = np.empty(n)
    cdef double[::1] dv = dv_a
    cdef double[::1] du = du_a
    cdef double[::1] dE = dE_a
    cdef double[::1] qt = qt_a
    cdef double[::1] st = st_a
    cdef double theta_x, u_x
    for i in range(n):
        dv[i] = -(FH[0, i + 1] - FH[0, i]) / dx
        du[i] = -(FH[1, i + 1] - FH[1, i]) / dx
        dE[i] = -(FH[2, i + 1] - FH[2, i]) / dx
        j = i + NGHOST
        theta_x = (P[2, j + 1] - P[2, j - 1]) / (2.0 * dx)
        u_x = (P[1, j + 1] - P[1, j - 1]) / (2.0 * dx)
        qt[i] = -c.kappa * theta_x / vv[i]
        st[i] = c.mu * u_x / vv[i]
    return dv_a, du_a, dE_a, qt_a, st_a, theta_a, speed_a
