"""Distribution catalog: cumulant transforms with closed-form derivatives.

Each entry presents a distribution through K(xi) = log E[exp(xi*X)] and
its first two derivatives on the open domain (-inf, xi_star), plus the
mean K'(0) and, where a closed form exists, the exact upper tail
P(X >= y).  Derivatives are closed-form by construction: the dual-
transform solver sits on top of K' and must not inherit differencing
noise.

Catalog families and their transforms:

    gamma(k, theta)    K(xi) = -k*log(1 - theta*xi)   xi_star = 1/theta
    exponential(lam)   gamma(1, 1/lam)                xi_star = lam
    normal(m, s)       K(xi) = m*xi + s^2*xi^2/2      xi_star = +inf
    poisson(lam)       K(xi) = lam*(e^xi - 1)         xi_star = +inf
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .exceptions import ArgumentError, ConvergenceError, DomainError, ParameterError

# family codes shared with the kernel backends
FAM_GAMMA = 0
FAM_NORMAL = 1
FAM_POISSON = 2

# exp/expm1 overflow guard; beyond this the transforms are +inf anyway
_EXP_GUARD = 700.0

_INF = float("inf")

_FAMILY_ALIASES = {
    "gamma": "gamma",
    "exponential": "exponential",
    "exp": "exponential",
    "normal": "normal",
    "poisson": "poisson",
}

_FAMILY_ARITY = {"gamma": 2, "exponential": 1, "normal": 2, "poisson": 1}


@dataclass(frozen=True)
class DistributionSpec:
    """Validated (family, parameters) pair; the unit the CLI and sampler consume."""

    family: str
    params: tuple[float, ...]

    def __post_init__(self):
        fam = _FAMILY_ALIASES.get(self.family)
        if fam is None:
            raise ParameterError(f"unknown family {self.family!r}")
        object.__setattr__(self, "family", fam)
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if len(self.params) != _FAMILY_ARITY[fam]:
            raise ParameterError(
                f"{fam} takes {_FAMILY_ARITY[fam]} parameter(s), got {len(self.params)}"
            )
        for p in self.params:
            if not math.isfinite(p):
                raise ParameterError(f"{fam} parameters must be finite, got {p}")
        if fam == "gamma":
            k, theta = self.params
            if k <= 0:
                raise ParameterError(f"gamma shape must be > 0, got {k}")
            if theta <= 0:
                raise ParameterError(f"gamma scale must be > 0, got {theta}")
        elif fam == "exponential":
            (lam,) = self.params
            if lam <= 0:
                raise ParameterError(f"exponential rate must be > 0, got {lam}")
        elif fam == "normal":
            _, s = self.params
            if s <= 0:
                raise ParameterError(f"normal scale must be > 0, got {s}")
        elif fam == "poisson":
            (lam,) = self.params
            if lam <= 0:
                raise ParameterError(f"poisson rate must be > 0, got {lam}")


def parse_spec(text: str) -> DistributionSpec:
    """Parse the CLI grammar ``family:p1,p2`` (e.g. ``gamma:8,1``, ``exp:1``)."""
    head, sep, tail = text.partition(":")
    if not sep or not tail:
        raise ParameterError(f"expected family:p1[,p2], got {text!r}")
    try:
        params = tuple(float(tok) for tok in tail.split(","))
    except ValueError as exc:
        raise ParameterError(f"bad parameter list in {text!r}: {exc}") from None
    return DistributionSpec(head.strip().lower(), params)


@dataclass(frozen=True, eq=False)
class CumulantModel:
    """A distribution presented through its cumulant transform.

    Immutable after construction; every operation on it is pure, so a
    model may be shared freely across threads.  ``kernel_key`` is the
    (family code, p0, p1) triple the compiled backend dispatches on;
    it is None for custom models, which always take the generic path.
    """

    name: str
    params: tuple[float, ...]
    xi_star: float
    mean: float
    K: Callable[[float], float]
    K1: Callable[[float], float]
    K2: Callable[[float], float]
    kernel_key: Optional[tuple[int, float, float]] = None
    k1_range: tuple[float, float] = (-_INF, _INF)

    def __repr__(self):
        ps = ",".join(f"{p:g}" for p in self.params)
        return f"CumulantModel({self.name}:{ps})"


def _gamma_transforms(k: float, theta: float):
    def K(xi: float) -> float:
        u = theta * xi
        if u >= 1.0:
            return _INF
        return -k * math.log1p(-u)

    def K1(xi: float) -> float:
        u = 1.0 - theta * xi
        if u <= 0.0:
            return _INF
        return k * theta / u

    def K2(xi: float) -> float:
        u = 1.0 - theta * xi
        if u <= 0.0:
            return _INF
        return k * theta * theta / (u * u)

    return K, K1, K2


def _normal_transforms(m: float, s: float):
    v = s * s

    def K(xi: float) -> float:
        return m * xi + 0.5 * v * xi * xi

    def K1(xi: float) -> float:
        return m + v * xi

    def K2(xi: float) -> float:
        return v

    return K, K1, K2


def _poisson_transforms(lam: float):
    def K(xi: float) -> float:
        if xi > _EXP_GUARD:
            return _INF
        return lam * math.expm1(xi)

    def K1(xi: float) -> float:
        if xi > _EXP_GUARD:
            return _INF
        return lam * math.exp(xi)

    return K, K1, K1


def make_model(spec: DistributionSpec) -> CumulantModel:
    """Build the closed-form cumulant model for a validated spec."""
    fam, p = spec.family, spec.params
    if fam == "gamma":
        k, theta = p
        K, K1, K2 = _gamma_transforms(k, theta)
        return CumulantModel(
            "gamma", p, 1.0 / theta, k * theta, K, K1, K2,
            kernel_key=(FAM_GAMMA, k, theta), k1_range=(0.0, _INF),
        )
    if fam == "exponential":
        (lam,) = p
        K, K1, K2 = _gamma_transforms(1.0, 1.0 / lam)
        return CumulantModel(
            "exponential", p, lam, 1.0 / lam, K, K1, K2,
            kernel_key=(FAM_GAMMA, 1.0, 1.0 / lam), k1_range=(0.0, _INF),
        )
    if fam == "normal":
        m, s = p
        K, K1, K2 = _normal_transforms(m, s)
        return CumulantModel(
            "normal", p, _INF, m, K, K1, K2,
            kernel_key=(FAM_NORMAL, m, s),
        )
    if fam == "poisson":
        (lam,) = p
        K, K1, K2 = _poisson_transforms(lam)
        return CumulantModel(
            "poisson", p, _INF, lam, K, K1, K2,
            kernel_key=(FAM_POISSON, lam, 0.0), k1_range=(0.0, _INF),
        )
    raise ParameterError(f"unknown family {fam!r}")


def custom_model(
    name: str,
    K: Callable[[float], float],
    K1: Callable[[float], float],
    K2: Callable[[float], float],
    xi_star: float,
    mean: float,
    k1_range: tuple[float, float] = (-_INF, _INF),
) -> CumulantModel:
    """Wrap user-supplied closed-form transforms; runs on the generic backend."""
    return CumulantModel(name, (), xi_star, mean, K, K1, K2, kernel_key=None,
                         k1_range=k1_range)


def cumulant_eval(model: CumulantModel, xi: float) -> tuple[float, float, float]:
    """Evaluate (K, K', K'') at xi, rejecting points at or beyond xi_star."""
    if not math.isfinite(xi):
        raise ArgumentError(f"xi must be finite, got {xi}")
    if xi >= model.xi_star:
        raise DomainError(
            f"xi={xi} is outside the cumulant domain (-inf, {model.xi_star})",
            xi=xi, xi_star=model.xi_star,
        )
    return model.K(xi), model.K1(xi), model.K2(xi)


# --- exact tails ----------------------------------------------------------

# Poisson-series shortcut applies to integral gamma shapes up to this size.
_GAMMA_SERIES_MAX_SHAPE = 64
_IGAMMA_RTOL = 1e-14
_IGAMMA_MAX_TERMS = 300


def _lower_gamma_series(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x) by power series; wants x < a+1."""
    term = 1.0 / a
    total = term
    n = a
    for _ in range(_IGAMMA_MAX_TERMS):
        n += 1.0
        term *= x / n
        total += term
        if abs(term) < abs(total) * _IGAMMA_RTOL:
            return total * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise ConvergenceError(f"incomplete-gamma series stalled at a={a}, x={x}")


def _upper_gamma_cf(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) by Lentz continued fraction; wants x >= a+1."""
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b if b != 0.0 else 1.0 / tiny
    h = d
    for i in range(1, _IGAMMA_MAX_TERMS + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _IGAMMA_RTOL:
            return h * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise ConvergenceError(f"incomplete-gamma fraction stalled at a={a}, x={x}")


def regularized_upper_gamma(a: float, x: float) -> float:
    """Q(a, x) = Gamma(a, x)/Gamma(a); series below the a+1 crossover, fraction above."""
    if a <= 0:
        raise ArgumentError(f"shape must be positive, got {a}")
    if x <= 0.0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _lower_gamma_series(a, x)
    return _upper_gamma_cf(a, x)


def _gamma_tail(k: float, theta: float, y: float) -> float:
    if y <= 0.0:
        return 1.0
    x = y / theta
    ik = round(k)
    if abs(k - ik) == 0.0 and 1 <= ik <= _GAMMA_SERIES_MAX_SHAPE:
        # P(X >= y) = e^{-x} sum_{j<k} x^j/j!  (Erlang tail)
        term = math.exp(-x)
        total = term
        for j in range(1, int(ik)):
            term *= x / j
            total += term
        return min(total, 1.0)
    return regularized_upper_gamma(k, x)


def _poisson_tail(lam: float, y: float) -> float:
    n = math.ceil(y)
    if n <= 0:
        return 1.0
    if n - 1 > lam:
        # deep tail: sum pmf upward from n, largest term first
        t = math.exp(n * math.log(lam) - lam - math.lgamma(n + 1))
        total = t
        j = n
        while t > total * 1e-18 and j < n + 100000:
            t *= lam / (j + 1)
            total += t
            j += 1
        return min(total, 1.0)
    # head side: sum pmf downward from j = n-1 (largest head term), complement
    t = math.exp((n - 1) * math.log(lam) - lam - math.lgamma(n))
    head = t
    for j in range(n - 1, 0, -1):
        t *= j / lam
        head += t
    return max(1.0 - head, 0.0)


def exact_tail(model: CumulantModel, y: float) -> Optional[float]:
    """Closed-form P(X >= y), or None where the catalog has no formula.

    Unavailable (None) is an ordinary result, not an error: sweep output
    leaves the field empty.
    """
    if model.kernel_key is None:
        return None
    name, p = model.name, model.params
    if name == "gamma":
        return _gamma_tail(p[0], p[1], y)
    if name == "exponential":
        return 1.0 if y <= 0 else math.exp(-p[0] * y)
    if name == "normal":
        m, s = p
        return 0.5 * math.erfc((y - m) / (s * math.sqrt(2.0)))
    if name == "poisson":
        return _poisson_tail(p[0], y)
    return None
