"""Generic 1-D numeric routines: bracketed roots, unimodal maximization,
adaptive quadrature.

Deterministic given their inputs; defaults favor relative control
because the quantities under study span many orders of magnitude.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

from .exceptions import ArgumentError, BracketError, ConvergenceError

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

DEFAULT_TOL_X = 1e-10
DEFAULT_TOL_F = 1e-12
DEFAULT_MAX_ITER = 200
DEFAULT_QUAD_RTOL = 1e-10
QUAD_MAX_DEPTH = 60


class AccuracyWarning(UserWarning):
    """A routine returned, but its accuracy target was not certified."""


@dataclass(frozen=True)
class RootBracket:
    """Interval expected to straddle a sign change of the target function."""

    lo: float
    hi: float
    tol_x: float = DEFAULT_TOL_X
    tol_f: float = DEFAULT_TOL_F
    max_iter: int = DEFAULT_MAX_ITER

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ArgumentError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")


@dataclass(frozen=True)
class OptimBracket:
    """Interval on which the target is assumed unimodal."""

    lo: float
    hi: float
    tol_x: float = DEFAULT_TOL_X
    max_iter: int = DEFAULT_MAX_ITER

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ArgumentError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")


def find_root(f: Callable[[float], float], bracket: RootBracket) -> float:
    """Root of f on a sign-change bracket.

    Secant-accelerated bisection (Illinois damping); any secant step
    that would leave the bracket falls back to the midpoint, so the
    result always stays inside the initial interval.
    """
    a, b = bracket.lo, bracket.hi
    fa, fb = f(a), f(b)
    if fa * fb > 0.0:
        raise BracketError(f"no sign change on [{a}, {b}]: f(lo)={fa}, f(hi)={fb}")
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa > 0.0:  # normalize to f(a) < 0 < f(b)
        g = f
        f = lambda x: -g(x)
        fa, fb = -fa, -fb

    side = 0
    x = 0.5 * (a + b)
    for _ in range(bracket.max_iter):
        den = fb - fa
        if den != 0.0 and math.isfinite(fa) and math.isfinite(fb):
            x = (a * fb - b * fa) / den
            if not a < x < b:
                x = 0.5 * (a + b)
        else:
            x = 0.5 * (a + b)
        fx = f(x)
        if abs(fx) <= bracket.tol_f:
            return x
        if fx < 0.0:
            if side == -1:
                fb *= 0.5
            a, fa, side = x, fx, -1
        else:
            if side == 1:
                fa *= 0.5
            b, fb, side = x, fx, 1
        if b - a <= bracket.tol_x:
            return x
    raise ConvergenceError(
        f"root search did not converge in {bracket.max_iter} iterations "
        f"(bracket [{a}, {b}], last f={fx})"
    )


def maximize_unimodal(f: Callable[[float], float], bracket: OptimBracket) -> tuple[float, float]:
    """Golden-section maximum of a unimodal f; never evaluates outside the bracket.

    Returns (x, f(x)) for the best probe once the interval is within
    tol_x of the maximizer.
    """
    a, b = bracket.lo, bracket.hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(bracket.max_iter):
        if b - a <= bracket.tol_x:
            break
        if fc < fd:
            a = c
            c, fc = d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
        else:
            b = d
            d, fd = c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
    else:
        raise ConvergenceError(
            f"golden section did not reach tol_x={bracket.tol_x} in "
            f"{bracket.max_iter} iterations (width {b - a})"
        )
    return (c, fc) if fc >= fd else (d, fd)


def integrate_adaptive(
    f: Callable[[float], float],
    a: float,
    b: float,
    rel_tol: float = DEFAULT_QUAD_RTOL,
) -> float:
    """Adaptive Simpson integral of f on [a, b] to relative tolerance rel_tol.

    Recursion depth is capped at 60; hitting the cap attaches an
    AccuracyWarning to the (still returned) estimate.
    """
    if not a < b:
        raise ArgumentError(f"integration needs a < b, got [{a}, {b}]")
    m = 0.5 * (a + b)
    fa, fm, fb = f(a), f(m), f(b)
    whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0
    tol = rel_tol * max(abs(whole), 1e-300)
    capped = False

    def recurse(a, fa, m, fm, b, fb, s, tol, depth):
        nonlocal capped
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) * (fa + 4.0 * flm + fm) / 6.0
        right = (b - m) * (fm + 4.0 * frm + fb) / 6.0
        s2 = left + right
        err = s2 - s
        if abs(err) <= 15.0 * tol:
            return s2 + err / 15.0
        if depth >= QUAD_MAX_DEPTH:
            capped = True
            return s2 + err / 15.0
        half = 0.5 * tol
        return (
            recurse(a, fa, lm, flm, m, fm, left, half, depth + 1)
            + recurse(m, fm, rm, frm, b, fb, right, half, depth + 1)
        )

    value = recurse(a, fa, m, fm, b, fb, whole, tol, 0)
    if capped:
        warnings.warn(
            AccuracyWarning(f"quadrature depth cap {QUAD_MAX_DEPTH} hit on [{a}, {b}]"),
            stacklevel=2,
        )
    return value
