"""Pure-Python kernel backend.

Implements the hot primitives (dual-transform solve, rate values,
objective pieces) over a model's K/K'/K'' callables.  The compiled
backend in ``_core`` mirrors this file operation for operation, with
the same bracketing, Illinois refinement, tolerances and guard
branches, so both backends agree to the last few ulps and tests can
compare them directly.
"""

from __future__ import annotations

import math

import numpy as np

from .exceptions import ConvergenceError, InternalConsistencyError

# dual solve: |K'(xi) - y| tolerance (relative), width cutoff, iteration cap
XI_RTOL_F = 1e-12
XI_RTOL_X = 1e-15
XI_MAX_ITER = 200

# rates are provably nonnegative; tiny negatives are cancellation noise,
# anything below this floor means the solver went wrong
RATE_FLOOR = -1e-12

_NEG_INF = float("-inf")


def _clamp_rate(r: float) -> float:
    if r < 0.0:
        if r < RATE_FLOOR:
            raise InternalConsistencyError(
                f"computed rate {r} below the {RATE_FLOOR} consistency floor"
            )
        return 0.0
    return r


def xi_solve(model, y: float) -> float:
    """Solve K'(xi) = y by bracketing plus Illinois-damped secant.

    K' is strictly increasing on (-inf, xi_star), so a sign-change
    bracket always exists for y in its open range; the caller validates
    the range.  Right tail brackets [0, b) with b climbing toward
    xi_star (geometrically when finite, doubling when infinite); the
    left tail mirrors with negative xi.
    """
    k1 = model.K1
    mean = model.mean
    xi_star = model.xi_star
    if y == mean:
        return 0.0

    if y > mean:
        a, fa = 0.0, mean - y
        if math.isfinite(xi_star):
            frac = 0.5
            b = xi_star * (1.0 - frac)
            fb = k1(b) - y
            while fb <= 0.0:
                a, fa = b, fb
                frac *= 0.5
                b = xi_star * (1.0 - frac)
                fb = k1(b) - y
        else:
            b = 1.0
            fb = k1(b) - y
            while fb <= 0.0:
                a, fa = b, fb
                b *= 2.0
                fb = k1(b) - y
                if b > 1e308:
                    raise ConvergenceError(f"no finite bracket for K'(xi)={y}")
    else:
        b, fb = 0.0, mean - y
        a = -1.0
        fa = k1(a) - y
        while fa >= 0.0:
            b, fb = a, fa
            a *= 2.0
            fa = k1(a) - y
            if a < -1e308:
                raise ConvergenceError(f"no finite bracket for K'(xi)={y}")

    if fa == 0.0:
        return a
    if fb == 0.0:
        return b

    ftol = XI_RTOL_F * max(1.0, abs(y))
    side = 0
    x = 0.5 * (a + b)
    for _ in range(XI_MAX_ITER):
        den = fb - fa
        if den != 0.0 and math.isfinite(fa) and math.isfinite(fb):
            x = (a * fb - b * fa) / den
            if not a < x < b:
                x = 0.5 * (a + b)
        else:
            x = 0.5 * (a + b)
        fx = k1(x) - y
        if abs(fx) <= ftol:
            return x
        if fx < 0.0:
            if side == -1:
                fb *= 0.5
            a, fa, side = x, fx, -1
        else:
            if side == 1:
                fa *= 0.5
            b, fb, side = x, fx, 1
        if b - a <= XI_RTOL_X * max(1.0, abs(a), abs(b)):
            return x
    raise ConvergenceError(
        f"dual solve for y={y} did not converge in {XI_MAX_ITER} iterations "
        f"(bracket [{a}, {b}])"
    )


def dual_prime(model, t: float) -> float:
    """Xi'(t) = 1/K''(Xi(t)), the derivative of the inverse tilt map."""
    return 1.0 / model.K2(xi_solve(model, t))


def rate_value(model, y: float) -> float:
    """I(y) = y*Xi(y) - K(Xi(y)), the Legendre transform of K at y."""
    xi = xi_solve(model, y)
    return _clamp_rate(y * xi - model.K(xi))


def tilted_rate_value(model, alpha: float, delta: float, y: float) -> float:
    """Rate of the measure tilted to mean alpha*y, evaluated at delta*y.

    Integral-free form: delta*y*(Xi(delta*y) - Xi(alpha*y))
    + K(Xi(alpha*y)) - K(Xi(delta*y)).  delta = 1 gives the rate at y.
    """
    xa = xi_solve(model, alpha * y)
    xd = xi_solve(model, delta * y)
    return _clamp_rate(delta * y * (xd - xa) + model.K(xa) - model.K(xd))


def objective_state(model, alpha: float, delta: float, y: float):
    """One objective evaluation: returns (A, B, L, G).

    A, B are the tilted-tail penalties exp(-I_a(y)), exp(-I_a(delta*y));
    L is the lower-bound objective, -inf when 1 - A - B <= 0; G is the
    delta-direction stationarity function B*Xi(delta*y) - (1-A)*Xi(alpha*y).
    """
    K = model.K
    xa = xi_solve(model, alpha * y)
    xd = xi_solve(model, delta * y)
    xy = xi_solve(model, y)
    Ka, Kd, Ky = K(xa), K(xd), K(xy)
    A = math.exp(-_clamp_rate(y * (xy - xa) + Ka - Ky))
    B = math.exp(-_clamp_rate(delta * y * (xd - xa) + Ka - Kd))
    s = 1.0 - A - B
    if s <= 0.0:
        L = _NEG_INF
    else:
        imu = _clamp_rate(alpha * y * xa - Ka)
        L = s * math.exp(-imu - xa * y * (delta - alpha))
    G = B * xd - (1.0 - A) * xa
    return A, B, L, G


def reduced_profile(model, alpha: float, y: float):
    """Profile along the alpha-stationarity curve:
    (A, delta_star, B_hat, log L_hat).

    delta_star = (alpha - A)/(1 - A).  The objective is reported in log
    form so deep-tail optima stay finite; it is -inf outside the
    feasible set.  Degenerate A >= 1 (alpha at 1 to within rounding)
    reports delta_star = inf and log L_hat = -inf.
    """
    K = model.K
    xa = xi_solve(model, alpha * y)
    xy = xi_solve(model, y)
    Ka, Ky = K(xa), K(xy)
    A = math.exp(-_clamp_rate(y * (xy - xa) + Ka - Ky))
    if A >= 1.0:
        return A, float("inf"), 0.0, _NEG_INF
    dstar = (alpha - A) / (1.0 - A)
    xd = xi_solve(model, dstar * y)
    Kd = K(xd)
    bhat = math.exp(-_clamp_rate(dstar * y * (xd - xa) + Ka - Kd))
    s = 1.0 - A - bhat
    if s <= 0.0:
        log_lhat = _NEG_INF
    else:
        imu = _clamp_rate(alpha * y * xa - Ka)
        log_lhat = math.log(s) - imu - xa * y * (dstar - alpha)
    return A, dstar, bhat, log_lhat


def g_value(model, alpha: float, delta: float, y: float) -> float:
    """G(alpha, delta, y) = B*Xi(delta*y) - (1-A)*Xi(alpha*y)."""
    return objective_state(model, alpha, delta, y)[3]


def objective_grid(model, y: float, alphas, deltas) -> np.ndarray:
    """Objective L over an alpha x delta grid; -inf marks infeasible cells.

    Cells with delta <= alpha violate the ordering precondition and are
    -inf as well.  Dual solves are hoisted: one per distinct alpha and
    one per distinct delta.
    """
    K = model.K
    alphas = np.asarray(alphas, dtype=float)
    deltas = np.asarray(deltas, dtype=float)
    na, nd = alphas.size, deltas.size
    out = np.full((na, nd), _NEG_INF)
    xy = xi_solve(model, y)
    Ky = K(xy)
    xds = [xi_solve(model, d * y) for d in deltas]
    Kds = [K(x) for x in xds]
    for i in range(na):
        a = alphas[i]
        xa = xi_solve(model, a * y)
        Ka = K(xa)
        A = math.exp(-_clamp_rate(y * (xy - xa) + Ka - Ky))
        imu = _clamp_rate(a * y * xa - Ka)
        for j in range(nd):
            d = deltas[j]
            if d <= a:
                continue
            B = math.exp(-_clamp_rate(d * y * (xds[j] - xa) + Ka - Kds[j]))
            s = 1.0 - A - B
            if s > 0.0:
                out[i, j] = s * math.exp(-imu - xa * y * (d - a))
    return out
