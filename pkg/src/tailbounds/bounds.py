"""Tail estimates over a cumulant model.

Five estimates of P(X >= y):

* ``chernoff_upper``   -- exp(-I(y)), the classical upper bound (both tails).
* ``lower_bound_new``  -- the two-parameter tilted lower bound
  sup_{1<alpha<delta} L(alpha, delta, y), computed by reducing to the
  alpha-stationarity curve delta*(alpha) = (alpha - A)/(1 - A) and
  maximizing the reduced objective between 1 and the feasibility
  frontier alpha_hat (where A + B_hat = 1); the intersection of
  delta*(.) with the delta-stationarity root delta_hat(.) serves as an
  independent cross-check of the optimum.
* ``stroock_lower``    -- Chebyshev-interval variant with delta pinned at
  2*alpha - 1; requires Xi'(alpha*y)*y^2*(alpha-1)^2 > 1, so it can be
  inapplicable (reported, not erred).
* ``bo_lower``         -- one-parameter variant with delta pinned at
  Xi^{-1}(2*Xi(alpha*y) - Xi(y))/y; inapplicable when that argument
  leaves the cumulant domain for every usable alpha.
* ``saddlepoint_tail`` -- Daniels-style integral approximation
  (2*pi)^{-1/2} * int_y^T sqrt(Xi'(t)) exp(-I(t)) dt; an estimate, not
  a bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _backend, _generic, legendre
from .exceptions import ArgumentError, BracketError, ConvergenceError, SolverFailure
from .models import CumulantModel
from .numerics import OptimBracket, RootBracket, find_root, integrate_adaptive, maximize_unimodal

_NEG_INF = float("-inf")

# alpha search insets: A reaches 1.0 in floating point as alpha -> 1, and the
# reduced objective is exactly zero on the frontier, so both ends are padded
ALPHA_EPS = 1e-6
FRONTIER_EPS = 1e-9

# dense comparison-bound scans: 2048 points, alpha - 1 log-spaced on (0, 15]
_SCAN_POINTS = 2048
_SCAN_SPAN = 15.0

_DELTA_HAT_EXPANSION_CAP = 1e6


@dataclass(frozen=True)
class BoundResult:
    """A bound value plus optimizer diagnostics."""

    value: Optional[float]
    alpha_opt: Optional[float]
    delta_opt: Optional[float]
    alpha_hat: Optional[float]
    status: str  # ok | inapplicable | infeasible | solver_failure
    evals: int
    diagnostics: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ObjectiveState:
    """One objective evaluation; L is -inf outside the feasible set."""

    alpha: float
    delta: float
    y: float
    A: float
    B: float
    L: float
    G: float


class _Evals:
    __slots__ = ("n",)

    def __init__(self):
        self.n = 0


def _objective(model, alpha, delta, y, ev):
    ev.n += 1
    key = _backend.compiled_key(model)
    if key is not None:
        return _backend.core().objective_state(key[0], key[1], key[2], alpha, delta, y)
    return _generic.objective_state(model, alpha, delta, y)


def _profile(model, alpha, y, ev):
    ev.n += 1
    key = _backend.compiled_key(model)
    if key is not None:
        return _backend.core().reduced_profile(key[0], key[1], key[2], alpha, y)
    return _generic.reduced_profile(model, alpha, y)


def _g(model, alpha, delta, y, ev):
    ev.n += 1
    key = _backend.compiled_key(model)
    if key is not None:
        return _backend.core().g_value(key[0], key[1], key[2], alpha, delta, y)
    return _generic.g_value(model, alpha, delta, y)


def _xi(model, t, ev):
    ev.n += 1
    key = _backend.compiled_key(model)
    if key is not None:
        return _backend.core().xi_solve(key[0], key[1], key[2], t)
    return _generic.xi_solve(model, t)


def _require_right_tail(model: CumulantModel, y: float) -> None:
    if not y > model.mean:
        raise ArgumentError(f"y must exceed the mean ({model.mean:g})")
    legendre._check_range(model, y)


def _require_tilt_point(model: CumulantModel, y: float) -> None:
    # the tilted construction brackets [y, delta*y] around the tilted
    # mean alpha*y, which needs y > 0 on top of y > mean
    _require_right_tail(model, y)
    if not y > 0.0:
        raise ArgumentError(f"tilted lower bounds need a positive tail point, got y={y}")


# --- Chernoff ---------------------------------------------------------------

def chernoff_upper(model: CumulantModel, y: float, tail: str = "right") -> float:
    """exp(-I(y)), clamped to 1; tail='left' bounds P(X <= y) for y below the mean."""
    if tail == "right":
        if not y > model.mean:
            raise ArgumentError(f"y must exceed the mean ({model.mean:g})")
    elif tail == "left":
        if not y < model.mean:
            raise ArgumentError(f"y must be below the mean ({model.mean:g})")
    else:
        raise ArgumentError(f"tail must be 'right' or 'left', got {tail!r}")
    return min(1.0, math.exp(-legendre.rate(model, y)))


# --- objective and its stationarity curves ----------------------------------

def objective_L(model: CumulantModel, alpha: float, delta: float, y: float) -> ObjectiveState:
    """Evaluate the lower-bound objective L(alpha, delta, y).

    L = (1 - A - B) * exp(-I(alpha*y) - Xi(alpha*y)*y*(delta - alpha)),
    reported as -inf when 1 - A - B <= 0.  Any finite value is itself a
    valid lower bound on P(X >= y).
    """
    if not alpha > 1.0:
        raise ArgumentError(f"alpha must exceed 1, got {alpha}")
    if not delta > alpha:
        raise ArgumentError(f"delta must exceed alpha, got delta={delta}, alpha={alpha}")
    _require_tilt_point(model, y)
    legendre._check_range(model, delta * y)
    ev = _Evals()
    A, B, L, G = _objective(model, alpha, delta, y, ev)
    return ObjectiveState(alpha=alpha, delta=delta, y=y, A=A, B=B, L=L, G=G)


def objective_grid(model: CumulantModel, y: float, alphas, deltas) -> np.ndarray:
    """L over an alpha x delta grid (-inf marks infeasible/invalid cells).

    This is the exhaustive-search surface used to validate the optimizer.
    """
    _require_right_tail(model, y)
    key = _backend.compiled_key(model)
    if key is not None:
        return _backend.core().objective_grid(key[0], key[1], key[2], y, alphas, deltas)
    return _generic.objective_grid(model, y, alphas, deltas)


def delta_star(model: CumulantModel, alpha: float, y: float) -> float:
    """Alpha-stationarity value delta*(alpha) = (alpha - A)/(1 - A); always > alpha."""
    if not alpha > 1.0:
        raise ArgumentError(f"alpha must exceed 1, got {alpha}")
    _require_tilt_point(model, y)
    ev = _Evals()
    A, dstar, _, _ = _profile(model, alpha, y, ev)
    if A >= 1.0:
        raise ArgumentError(
            f"A = exp(-I_a(y)) rounds to 1 at alpha={alpha}; move alpha away from 1"
        )
    return dstar


def _delta_hat_impl(model, alpha, y, ev) -> float:
    # G > 0 on (alpha, delta_hat) and negative beyond, so geometric
    # expansion of the gap from alpha certifies a sign-change bracket.
    lo = alpha
    flo = _g(model, alpha, alpha, y, ev)
    gap = max(0.5, 0.5 * alpha)
    while True:
        hi = alpha + gap
        fhi = _g(model, alpha, hi, y, ev)
        if fhi <= 0.0:
            break
        lo, flo = hi, fhi
        gap *= 2.0
        if hi > _DELTA_HAT_EXPANSION_CAP * alpha:
            raise SolverFailure(
                f"no sign change of G out to delta = {hi}",
                diagnostics={"alpha": alpha, "y": y, "last_g": fhi},
            )
    return find_root(
        lambda d: _g(model, alpha, d, y, ev),
        RootBracket(lo, hi, tol_x=1e-13 * max(1.0, hi), tol_f=1e-12),
    )


def delta_hat(model: CumulantModel, alpha: float, y: float) -> float:
    """The unique root delta_hat(alpha) of G(alpha, ., y) beyond alpha.

    G starts positive at delta = alpha, peaks, and decreases through its
    single zero; dG/ddelta < 0 there.
    """
    if not alpha > 1.0:
        raise ArgumentError(f"alpha must exceed 1, got {alpha}")
    _require_tilt_point(model, y)
    return _delta_hat_impl(model, alpha, y, _Evals())


# --- the two-parameter lower bound ------------------------------------------

def _alpha_check(model, y, ev) -> float:
    """Argmin of delta*(alpha): the quasiconvex curve's unique minimum."""
    lo = 1.0 + ALPHA_EPS

    def dstar(a):
        return _profile(model, a, y, ev)[1]

    # double alpha until three consecutive probes rise: the minimum is
    # then certainly below the last probe (quasiconvexity)
    hi = 1.0
    vals = []
    while True:
        hi *= 2.0
        vals.append(dstar(hi))
        if len(vals) >= 3 and vals[-3] < vals[-2] < vals[-1]:
            break
        if hi > 2.0**40:
            raise SolverFailure(
                "delta* never started increasing; cannot bracket its minimum",
                diagnostics={"y": y, "last_alpha": hi},
            )
    x, _ = maximize_unimodal(
        lambda a: -dstar(a), OptimBracket(lo, hi, tol_x=1e-9 * max(1.0, hi))
    )
    return x


def _alpha_hat_root(model, y, a_check, ev) -> float:
    """Feasibility frontier: the zero of A + B_hat - 1 below alpha_check."""
    lo = 1.0 + ALPHA_EPS

    def h(a):
        p = _profile(model, a, y, ev)
        return p[0] + p[2] - 1.0

    hlo, hhi = h(lo), h(a_check)
    if not hlo < 0.0:
        raise SolverFailure(
            "A + B_hat >= 1 already at alpha -> 1; frontier not bracketable",
            diagnostics={"y": y, "h_lo": hlo},
        )
    if not hhi > 0.0:
        raise SolverFailure(
            "A + B_hat < 1 at the delta* minimum; frontier not bracketable",
            diagnostics={"y": y, "alpha_check": a_check, "h_hi": hhi},
        )
    # h is O(1 - A) ~ 1e-13 near alpha = 1 without being at its root, so the
    # crossing must be located by interval width, not by |h|
    return find_root(
        h, RootBracket(lo, a_check, tol_x=1e-13 * max(1.0, a_check), tol_f=0.0)
    )


def _cross_alpha(model, y, a_star, lo, hi, ev) -> float:
    """Intersection of delta*(.) and delta_hat(.): delta* - delta_hat changes
    sign from + to - across the maximizer."""

    def c(a):
        return _profile(model, a, y, ev)[1] - _delta_hat_impl(model, a, y, ev)

    w = max(1e-4 * a_star, 1e-9)
    a_lo = max(lo, a_star - w)
    a_hi = min(hi, a_star + w)
    while c(a_lo) <= 0.0 and a_lo > lo:
        w *= 4.0
        a_lo = max(lo, a_star - w)
    while c(a_hi) >= 0.0 and a_hi < hi:
        w *= 4.0
        a_hi = min(hi, a_star + w)
    return find_root(
        c, RootBracket(a_lo, a_hi, tol_x=1e-13 * max(1.0, a_star), tol_f=1e-14)
    )


def _scan_profile(model, y, lo, hi, ev, points=512):
    out = []
    for a in np.linspace(lo, hi, points):
        out.append((float(a), _profile(model, a, y, ev)[3]))
    return out


def lower_bound_new(model: CumulantModel, y: float) -> BoundResult:
    """Maximize the tilted lower-bound objective over 1 < alpha < delta.

    Reduction to one dimension: along delta*(alpha) the alpha-partial of
    L vanishes identically, the reduced objective is positive exactly on
    (1, alpha_hat) and has a unique interior maximum, so a golden
    section between the insets finds it.  The returned value is a valid
    lower bound on P(X >= y) and is strictly positive for every y above
    the mean.
    """
    _require_tilt_point(model, y)
    ev = _Evals()
    try:
        a_check = _alpha_check(model, y, ev)
        a_hat = _alpha_hat_root(model, y, a_check, ev)
    except SolverFailure as exc:
        return BoundResult(None, None, None, None, "solver_failure", ev.n,
                           diagnostics=dict(exc.diagnostics))
    except (BracketError, ConvergenceError) as exc:
        return BoundResult(None, None, None, None, "solver_failure", ev.n,
                           diagnostics={"reason": str(exc)})

    lo = 1.0 + ALPHA_EPS
    hi = a_hat - FRONTIER_EPS
    if not hi > lo:
        return BoundResult(None, None, None, a_hat, "solver_failure", ev.n,
                           diagnostics={"reason": "frontier below the alpha inset"})

    a_star, _ = maximize_unimodal(
        lambda a: _profile(model, a, y, ev)[3],
        OptimBracket(lo, hi, tol_x=1e-11 * max(1.0, hi)),
    )
    A, dstar, bhat, lhat = _profile(model, a_star, y, ev)
    if not (math.isfinite(lhat) and lhat > 0.0):
        return BoundResult(
            None, a_star, None, a_hat, "solver_failure", ev.n,
            diagnostics={"reason": "no positive objective located",
                         "profile": _scan_profile(model, y, lo, hi, ev)},
        )

    diagnostics = {"alpha_check": a_check, "A": A, "B_hat": bhat}
    status = "ok"
    try:
        a_cross = _cross_alpha(model, y, a_star, lo, hi, ev)
        g_cross = _g(model, a_cross, _profile(model, a_cross, y, ev)[1], y, ev)
        diagnostics["alpha_cross"] = a_cross
        diagnostics["g_at_cross"] = g_cross
        if abs(a_cross - a_star) > 1e-4 * a_star:
            status = "solver_failure"
            diagnostics["reason"] = "stationarity cross-check disagrees with maximizer"
    except (SolverFailure, ArgumentError, BracketError, ConvergenceError) as exc:
        status = "solver_failure"
        diagnostics["reason"] = f"cross-check failed: {exc}"

    return BoundResult(
        value=lhat, alpha_opt=a_star, delta_opt=dstar, alpha_hat=a_hat,
        status=status, evals=ev.n, diagnostics=diagnostics,
    )


# --- comparison bounds --------------------------------------------------------

def _scan_alphas() -> np.ndarray:
    return 1.0 + np.geomspace(1e-6, _SCAN_SPAN, _SCAN_POINTS)


def _stroock_objective(model, alpha, y, ev) -> float:
    """Log of the Chebyshev-form objective; -inf wherever the variance
    condition fails.

    The (1 - A - B) factor of L cancels against the same factor in the
    published ratio, leaving (1 - 1/C) * exp(-I(alpha*y) -
    Xi(alpha*y)*y*(alpha-1)) with C = Xi'(alpha*y)*y^2*(alpha-1)^2; the
    cancelled form stays well-defined where 1 - A - B <= 0, and working
    in logs keeps deep-tail values finite.
    """
    lo, hi = model.k1_range
    if not lo < (2.0 * alpha - 1.0) * y < hi:
        return _NEG_INF
    xa = _xi(model, alpha * y, ev)
    c = (y * y * (alpha - 1.0) ** 2) / model.K2(xa)
    if c <= 1.0:
        return _NEG_INF
    Ka = model.K(xa)
    imu = max(alpha * y * xa - Ka, 0.0)
    return math.log1p(-1.0 / c) - imu - xa * y * (alpha - 1.0)


def stroock_lower(model: CumulantModel, y: float) -> BoundResult:
    """Best Chebyshev-interval lower bound over alpha; Inapplicable when the
    condition Xi'(alpha*y)*y^2*(alpha-1)^2 > 1 fails on the whole scan.

    Far enough out the optimum can drop below the double-precision
    floor; ``value`` then underflows to 0.0 while ``diagnostics``
    retains the finite log value.
    """
    _require_tilt_point(model, y)
    ev = _Evals()
    alphas = _scan_alphas()
    vals = [_stroock_objective(model, a, y, ev) for a in alphas]
    i = int(np.argmax(vals))
    if vals[i] == _NEG_INF:
        return BoundResult(None, None, None, None, "inapplicable", ev.n)
    lo = alphas[max(i - 1, 0)]
    hi = alphas[min(i + 1, len(alphas) - 1)]
    a_opt, v_opt = maximize_unimodal(
        lambda a: _stroock_objective(model, a, y, ev),
        OptimBracket(lo, hi, tol_x=1e-10 * max(1.0, hi)),
    )
    if v_opt < vals[i]:
        a_opt, v_opt = float(alphas[i]), vals[i]
    return BoundResult(
        value=math.exp(v_opt), alpha_opt=a_opt, delta_opt=2.0 * a_opt - 1.0,
        alpha_hat=None, status="ok", evals=ev.n, diagnostics={"log_value": v_opt},
    )


def bo_delta(model: CumulantModel, alpha: float, y: float) -> float:
    """The pinned second parameter Xi^{-1}(2*Xi(alpha*y) - Xi(y))/y.

    Raises DomainError when the dual argument reaches xi_star, which is
    what rules the bound out at that alpha.
    """
    if not alpha > 1.0:
        raise ArgumentError(f"alpha must exceed 1, got {alpha}")
    _require_tilt_point(model, y)
    ev = _Evals()
    lam = 2.0 * _xi(model, alpha * y, ev) - _xi(model, y, ev)
    return legendre.xi_inverse(model, lam) / y


def _bo_objective(model, alpha, y, xy, Ky, ev):
    """Log value and pinned delta at one alpha; (-inf, None) where unusable."""
    xa = _xi(model, alpha * y, ev)
    lam = 2.0 * xa - xy
    if lam >= model.xi_star:
        return _NEG_INF, None
    dy = model.K1(lam)
    delta = dy / y
    if not delta > alpha:
        return _NEG_INF, None
    Ka = model.K(xa)
    A = math.exp(-max(y * (xy - xa) + Ka - Ky, 0.0))
    # Xi(delta*y) = lam by duality; no extra solve needed
    B = math.exp(-max(dy * (lam - xa) + Ka - model.K(lam), 0.0))
    num = 1.0 - (xa / (xa - xy)) * (A + B)
    if num <= 0.0 or 1.0 - A - B <= 0.0:
        return _NEG_INF, delta
    imu = max(alpha * y * xa - Ka, 0.0)
    return math.log(num) - imu - xa * y * (delta - alpha), delta


def bo_lower(model: CumulantModel, y: float) -> BoundResult:
    """Best one-parameter pinned-delta lower bound over alpha.

    Alphas whose dual argument leaves the cumulant domain are skipped;
    Inapplicable when nothing usable remains.  Like ``stroock_lower``,
    ``value`` may underflow to 0.0 deep in the tail; ``diagnostics``
    keeps the finite log value.
    """
    _require_tilt_point(model, y)
    ev = _Evals()
    xy = _xi(model, y, ev)
    Ky = model.K(xy)
    alphas = _scan_alphas()
    vals = [_bo_objective(model, a, y, xy, Ky, ev)[0] for a in alphas]
    i = int(np.argmax(vals))
    if vals[i] == _NEG_INF:
        return BoundResult(None, None, None, None, "inapplicable", ev.n)
    lo = alphas[max(i - 1, 0)]
    hi = alphas[min(i + 1, len(alphas) - 1)]
    a_opt, v_opt = maximize_unimodal(
        lambda a: _bo_objective(model, a, y, xy, Ky, ev)[0],
        OptimBracket(lo, hi, tol_x=1e-10 * max(1.0, hi)),
    )
    if v_opt < vals[i]:
        a_opt, v_opt = float(alphas[i]), vals[i]
    return BoundResult(
        value=math.exp(v_opt), alpha_opt=a_opt,
        delta_opt=_bo_objective(model, a_opt, y, xy, Ky, ev)[1],
        alpha_hat=None, status="ok", evals=ev.n, diagnostics={"log_value": v_opt},
    )


# --- saddlepoint --------------------------------------------------------------

def saddlepoint_tail(
    model: CumulantModel,
    y: float,
    trunc_nats: float = 40.0,
    rel_tol: float = 1e-10,
) -> float:
    """(2*pi)^{-1/2} * int_y^T sqrt(Xi'(t)) exp(-I(t)) dt.

    T is chosen so the discarded tail is down by at least trunc_nats in
    the exponent (relative truncation error below e^{-trunc_nats}).
    An approximation to P(X >= y), not a bound.
    """
    _require_right_tail(model, y)
    ev = _Evals()
    base = legendre.rate(model, y)
    target = base + trunc_nats

    K, K2 = model.K, model.K2

    def rate_at(t):
        x = _xi(model, t, ev)
        return t * x - K(x)

    width = max(y - model.mean, math.sqrt(K2(0.0)), 1e-12)
    cap = 1e6 * max(1.0, abs(y))
    t = y + width
    while rate_at(t) < target:
        width *= 2.0
        t = y + width
        if t > cap:
            import warnings

            from .numerics import AccuracyWarning

            warnings.warn(
                AccuracyWarning(f"truncation search capped at T={t}"), stacklevel=2
            )
            break

    def integrand(u):
        x = _xi(model, u, ev)
        return math.sqrt(1.0 / K2(x)) * math.exp(-(u * x - K(x)))

    return integrate_adaptive(integrand, y, t, rel_tol) / math.sqrt(2.0 * math.pi)
