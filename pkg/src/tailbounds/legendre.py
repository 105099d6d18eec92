"""Legendre-dual machinery over a cumulant model.

Xi(y) solves K'(xi) = y and is increasing and concave with Xi(mean) = 0;
its transform I(y) = y*Xi(y) - K(Xi(y)) is the exponent in the upper
tail bound.  The tilted rates I_a(y), I_a(delta*y) quantify how much
mass the measure re-centered at alpha*y keeps outside [y, delta*y];
they are computed in integral-free form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _backend, _generic
from .exceptions import ArgumentError, DomainError, RangeError
from .models import CumulantModel


@dataclass(frozen=True)
class DualPoint:
    """Xi and friends at one tail abscissa."""

    y: float
    xi: float
    xi_prime: float
    rate: float


@dataclass(frozen=True)
class TiltedRates:
    """Tilted rates at (alpha, delta, y) with their tail penalties A, B."""

    alpha: float
    delta: float
    y: float
    I_alpha_y: float
    I_alpha_delta_y: float
    A: float
    B: float


def _check_range(model: CumulantModel, y: float) -> None:
    lo, hi = model.k1_range
    if not (lo < y < hi):
        raise RangeError(
            f"y={y} is outside the open range ({lo}, {hi}) of K' for {model.name}",
            y=y, lo=lo, hi=hi,
        )
    if not math.isfinite(y):
        raise RangeError(f"y must be finite, got {y}", y=y, lo=lo, hi=hi)


def xi(model: CumulantModel, y: float) -> float:
    """The dual point Xi(y): the unique root of K'(xi) = y.

    Positive for y above the mean, negative below, zero at the mean.
    """
    _check_range(model, y)
    key = _backend.compiled_key(model)
    if key is not None:
        return _backend.core().xi_solve(key[0], key[1], key[2], y)
    return _generic.xi_solve(model, y)


def xi_inverse(model: CumulantModel, lam: float) -> float:
    """Xi^{-1}(lam) = K'(lam); rejects lam at or beyond xi_star."""
    if lam >= model.xi_star:
        raise DomainError(
            f"lam={lam} is outside the cumulant domain (-inf, {model.xi_star})",
            xi=lam, xi_star=model.xi_star,
        )
    return model.K1(lam)


def rate(model: CumulantModel, y: float) -> float:
    """The rate I(y) = y*Xi(y) - K(Xi(y)); nonnegative, zero at the mean."""
    _check_range(model, y)
    key = _backend.compiled_key(model)
    if key is not None:
        return _backend.core().rate_value(key[0], key[1], key[2], y)
    return _generic.rate_value(model, y)


def xi_prime(model: CumulantModel, t: float) -> float:
    """Xi'(t) = 1/K''(Xi(t)); nonnegative by convexity of K."""
    _check_range(model, t)
    key = _backend.compiled_key(model)
    if key is not None:
        return _backend.core().dual_prime(key[0], key[1], key[2], t)
    return _generic.dual_prime(model, t)


def dual_point(model: CumulantModel, y: float) -> DualPoint:
    """Bundle Xi(y), Xi'(y) and the rate I(y)."""
    x = xi(model, y)
    return DualPoint(y=y, xi=x, xi_prime=1.0 / model.K2(x), rate=rate(model, y))


def _check_tilt_args(model: CumulantModel, alpha: float, delta: float, y: float) -> None:
    if not alpha >= 1.0:
        raise ArgumentError(f"alpha must be >= 1, got {alpha}")
    if not delta > 0.0:
        raise ArgumentError(f"delta must be > 0, got {delta}")
    if not y > model.mean:
        raise ArgumentError(f"y must exceed the mean ({model.mean:g}), got {y}")
    _check_range(model, alpha * y)
    _check_range(model, delta * y)


def tilted_rate(model: CumulantModel, alpha: float, delta: float, y: float) -> float:
    """I_a(delta*y) for the measure tilted to mean alpha*y; delta=1 gives I_a(y).

    Vanishes at delta = alpha (the tilted mean) and is nonnegative
    everywhere else in range.
    """
    _check_tilt_args(model, alpha, delta, y)
    key = _backend.compiled_key(model)
    if key is not None:
        return _backend.core().tilted_rate_value(key[0], key[1], key[2], alpha, delta, y)
    return _generic.tilted_rate_value(model, alpha, delta, y)


def tilted_pair(model: CumulantModel, alpha: float, y: float, delta: float) -> TiltedRates:
    """Both tilted rates at (alpha, delta, y) with A = e^{-I_a(y)}, B = e^{-I_a(delta*y)}."""
    iy = tilted_rate(model, alpha, 1.0, y)
    idy = tilted_rate(model, alpha, delta, y)
    return TiltedRates(
        alpha=alpha, delta=delta, y=y,
        I_alpha_y=iy, I_alpha_delta_y=idy,
        A=math.exp(-iy), B=math.exp(-idy),
    )
