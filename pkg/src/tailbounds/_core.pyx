# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the catalog cumulant families.

Mirror of ``_generic`` specialized to the family-coded closed forms
(0 = gamma(k, theta), 1 = normal(m, s), 2 = poisson(lam)): identical
bracketing, Illinois refinement, tolerances and guard branches, so the
two backends agree on shared inputs.
"""

from libc.math cimport exp, expm1, fabs, isfinite, log, log1p

import numpy as np

from .exceptions import ConvergenceError, InternalConsistencyError

cdef double XI_RTOL_F = 1e-12
cdef double XI_RTOL_X = 1e-15
cdef int XI_MAX_ITER = 200
cdef double RATE_FLOOR = -1e-12
cdef double EXP_GUARD = 700.0
cdef double INF = float("inf")
cdef double NEG_INF = float("-inf")


cdef inline double _k(int fam, double p0, double p1, double x) noexcept:
    cdef double u
    if fam == 0:
        u = p1 * x
        if u >= 1.0:
            return INF
        return -p0 * log1p(-u)
    elif fam == 1:
        return p0 * x + 0.5 * p1 * p1 * x * x
    else:
        if x > EXP_GUARD:
            return INF
        return p0 * expm1(x)


cdef inline double _k1(int fam, double p0, double p1, double x) noexcept:
    cdef double u
    if fam == 0:
        u = 1.0 - p1 * x
        if u <= 0.0:
            return INF
        return p0 * p1 / u
    elif fam == 1:
        return p0 + p1 * p1 * x
    else:
        if x > EXP_GUARD:
            return INF
        return p0 * exp(x)


cdef inline double _k2(int fam, double p0, double p1, double x) noexcept:
    cdef double u
    if fam == 0:
        u = 1.0 - p1 * x
        if u <= 0.0:
            return INF
        return p0 * p1 * p1 / (u * u)
    elif fam == 1:
        return p1 * p1
    else:
        if x > EXP_GUARD:
            return INF
        return p0 * exp(x)


cdef inline double _mean(int fam, double p0, double p1) noexcept:
    if fam == 0:
        return p0 * p1
    return p0


cdef inline double _xi_star(int fam, double p0, double p1) noexcept:
    if fam == 0:
        return 1.0 / p1
    return INF


cdef double _clamp_rate(double r) except? -1.0:
    if r < 0.0:
        if r < RATE_FLOOR:
            raise InternalConsistencyError(
                f"computed rate {r} below the {RATE_FLOOR} consistency floor"
            )
        return 0.0
    return r


cdef double _xi_solve(int fam, double p0, double p1, double y) except? -1e308:
    cdef double mean = _mean(fam, p0, p1)
    cdef double xi_star = _xi_star(fam, p0, p1)
    cdef double a, b, fa, fb, frac, x, fx, den, ftol
    cdef int side, it

    if y == mean:
        return 0.0

    if y > mean:
        a = 0.0
        fa = mean - y
        if isfinite(xi_star):
            frac = 0.5
            b = xi_star * (1.0 - frac)
            fb = _k1(fam, p0, p1, b) - y
            while fb <= 0.0:
                a = b
                fa = fb
                frac *= 0.5
                b = xi_star * (1.0 - frac)
                fb = _k1(fam, p0, p1, b) - y
        else:
            b = 1.0
            fb = _k1(fam, p0, p1, b) - y
            while fb <= 0.0:
                a = b
                fa = fb
                b *= 2.0
                fb = _k1(fam, p0, p1, b) - y
                if b > 1e308:
                    raise ConvergenceError(f"no finite bracket for K'(xi)={y}")
    else:
        b = 0.0
        fb = mean - y
        a = -1.0
        fa = _k1(fam, p0, p1, a) - y
        while fa >= 0.0:
            b = a
            fb = fa
            a *= 2.0
            fa = _k1(fam, p0, p1, a) - y
            if a < -1e308:
                raise ConvergenceError(f"no finite bracket for K'(xi)={y}")

    if fa == 0.0:
        return a
    if fb == 0.0:
        return b

    ftol = XI_RTOL_F * max(1.0, fabs(y))
    side = 0
    x = 0.5 * (a + b)
    for it in range(XI_MAX_ITER):
        den = fb - fa
        if den != 0.0 and isfinite(fa) and isfinite(fb):
            x = (a * fb - b * fa) / den
            if not (a < x < b):
                x = 0.5 * (a + b)
        else:
            x = 0.5 * (a + b)
        fx = _k1(fam, p0, p1, x) - y
        if fabs(fx) <= ftol:
            return x
        if fx < 0.0:
            if side == -1:
                fb *= 0.5
            a = x
            fa = fx
            side = -1
        else:
            if side == 1:
                fa *= 0.5
            b = x
            fb = fx
            side = 1
        if b - a <= XI_RTOL_X * max(1.0, fabs(a), fabs(b)):
            return x
    raise ConvergenceError(
        f"dual solve for y={y} did not converge in {XI_MAX_ITER} iterations "
        f"(bracket [{a}, {b}])"
    )


def xi_solve(int fam, double p0, double p1, double y):
    return _xi_solve(fam, p0, p1, y)


def cumulant_triple(int fam, double p0, double p1, double x):
    return _k(fam, p0, p1, x), _k1(fam, p0, p1, x), _k2(fam, p0, p1, x)


def dual_prime(int fam, double p0, double p1, double t):
    return 1.0 / _k2(fam, p0, p1, _xi_solve(fam, p0, p1, t))


def rate_value(int fam, double p0, double p1, double y):
    cdef double xi = _xi_solve(fam, p0, p1, y)
    return _clamp_rate(y * xi - _k(fam, p0, p1, xi))


def tilted_rate_value(int fam, double p0, double p1, double alpha, double delta, double y):
    cdef double xa = _xi_solve(fam, p0, p1, alpha * y)
    cdef double xd = _xi_solve(fam, p0, p1, delta * y)
    return _clamp_rate(delta * y * (xd - xa) + _k(fam, p0, p1, xa) - _k(fam, p0, p1, xd))


def objective_state(int fam, double p0, double p1, double alpha, double delta, double y):
    cdef double xa = _xi_solve(fam, p0, p1, alpha * y)
    cdef double xd = _xi_solve(fam, p0, p1, delta * y)
    cdef double xy = _xi_solve(fam, p0, p1, y)
    cdef double Ka = _k(fam, p0, p1, xa)
    cdef double Kd = _k(fam, p0, p1, xd)
    cdef double Ky = _k(fam, p0, p1, xy)
    cdef double A = exp(-_clamp_rate(y * (xy - xa) + Ka - Ky))
    cdef double B = exp(-_clamp_rate(delta * y * (xd - xa) + Ka - Kd))
    cdef double s = 1.0 - A - B
    cdef double L, imu
    if s <= 0.0:
        L = NEG_INF
    else:
        imu = _clamp_rate(alpha * y * xa - Ka)
        L = s * exp(-imu - xa * y * (delta - alpha))
    return A, B, L, B * xd - (1.0 - A) * xa


def reduced_profile(int fam, double p0, double p1, double alpha, double y):
    # objective reported in log form; see _generic.reduced_profile
    cdef double xa = _xi_solve(fam, p0, p1, alpha * y)
    cdef double xy = _xi_solve(fam, p0, p1, y)
    cdef double Ka = _k(fam, p0, p1, xa)
    cdef double Ky = _k(fam, p0, p1, xy)
    cdef double A = exp(-_clamp_rate(y * (xy - xa) + Ka - Ky))
    cdef double dstar, xd, Kd, bhat, s, log_lhat, imu
    if A >= 1.0:
        return A, INF, 0.0, NEG_INF
    dstar = (alpha - A) / (1.0 - A)
    xd = _xi_solve(fam, p0, p1, dstar * y)
    Kd = _k(fam, p0, p1, xd)
    bhat = exp(-_clamp_rate(dstar * y * (xd - xa) + Ka - Kd))
    s = 1.0 - A - bhat
    if s <= 0.0:
        log_lhat = NEG_INF
    else:
        imu = _clamp_rate(alpha * y * xa - Ka)
        log_lhat = log(s) - imu - xa * y * (dstar - alpha)
    return A, dstar, bhat, log_lhat


def g_value(int fam, double p0, double p1, double alpha, double delta, double y):
    return objective_state(fam, p0, p1, alpha, delta, y)[3]


def objective_grid(int fam, double p0, double p1, double y, alphas, deltas):
    cdef double[::1] av = np.ascontiguousarray(alphas, dtype=np.float64)
    cdef double[::1] dv = np.ascontiguousarray(deltas, dtype=np.float64)
    cdef Py_ssize_t na = av.shape[0]
    cdef Py_ssize_t nd = dv.shape[0]
    out = np.full((na, nd), NEG_INF)
    cdef double[:, ::1] ov = out
    xds_arr = np.empty(nd)
    kds_arr = np.empty(nd)
    cdef double[::1] xds = xds_arr
    cdef double[::1] kds = kds_arr
    cdef double xy = _xi_solve(fam, p0, p1, y)
    cdef double Ky = _k(fam, p0, p1, xy)
    cdef Py_ssize_t i, j
    cdef double a, d, xa, Ka, A, imu, B, s
    for j in range(nd):
        xds[j] = _xi_solve(fam, p0, p1, dv[j] * y)
        kds[j] = _k(fam, p0, p1, xds[j])
    for i in range(na):
        a = av[i]
        xa = _xi_solve(fam, p0, p1, a * y)
        Ka = _k(fam, p0, p1, xa)
        A = exp(-_clamp_rate(y * (xy - xa) + Ka - Ky))
        imu = _clamp_rate(a * y * xa - Ka)
        for j in range(nd):
            d = dv[j]
            if d <= a:
                continue
            B = exp(-_clamp_rate(d * y * (xds[j] - xa) + Ka - kds[j]))
            s = 1.0 - A - B
            if s > 0.0:
                ov[i, j] = s * exp(-imu - xa * y * (d - a))
    return out
