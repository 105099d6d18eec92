"""Sampling-based empirical tails with Wilson confidence intervals.

Streams are counter-based: the generator for (seed, stream) is a Philox
engine keyed on that pair, so grid point i of a sweep can draw from
stream i in any order (or in parallel) and reproduce identical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .exceptions import ArgumentError
from .models import DistributionSpec

_CHUNK = 1 << 20


@dataclass(frozen=True)
class McEstimate:
    """Empirical tail estimate with a Wilson score interval."""

    y: float
    n: int
    hits: int
    p_hat: float
    ci_lo: float
    ci_hi: float
    confidence: float


def _generator(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(stream)])))


def _polar_normal(gen: np.random.Generator, n: int) -> np.ndarray:
    """Standard normals via the Marsaglia polar transform of uniform pairs."""
    out = np.empty(n)
    filled = 0
    while filled < n:
        m = max(2 * (n - filled), 1024)
        u = 2.0 * gen.random(m) - 1.0
        v = 2.0 * gen.random(m) - 1.0
        s = u * u + v * v
        ok = (s > 0.0) & (s < 1.0)
        f = np.sqrt(-2.0 * np.log(s[ok]) / s[ok])
        z = np.concatenate([u[ok] * f, v[ok] * f])
        take = min(z.size, n - filled)
        out[filled:filled + take] = z[:take]
        filled += take
    return out


def _gamma_rejection(gen: np.random.Generator, n: int, shape: float) -> np.ndarray:
    """Unit-scale gamma variates, shape >= 1, by squeeze-accepted rejection
    from a cubed-normal proposal (Marsaglia-Tsang)."""
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(n)
    filled = 0
    while filled < n:
        m = max(2 * (n - filled), 1024)
        x = _polar_normal(gen, m)
        v = (1.0 + c * x) ** 3
        u = gen.random(m)
        pos = v > 0.0
        logv = np.where(pos, np.log(np.where(pos, v, 1.0)), 0.0)
        acc = pos & (np.log(u) < 0.5 * x * x + d - d * v + d * logv)
        vals = d * v[acc]
        take = min(vals.size, n - filled)
        out[filled:filled + take] = vals[:take]
        filled += take
    return out


def _sample_gamma(gen: np.random.Generator, n: int, shape: float, scale: float) -> np.ndarray:
    if shape == round(shape) and shape >= 1:
        # integral shape: sum of unit exponentials
        k = int(round(shape))
        out = np.empty(n)
        block = max(_CHUNK // k, 1)
        filled = 0
        while filled < n:
            m = min(block, n - filled)
            u = gen.random((m, k))
            out[filled:filled + m] = -np.log1p(-u).sum(axis=1)
            filled += m
        return scale * out
    if shape >= 1.0:
        return scale * _gamma_rejection(gen, n, shape)
    # boost: Gamma(a) = Gamma(a+1) * U^{1/a}
    g = _gamma_rejection(gen, n, shape + 1.0)
    u = gen.random(n)
    return scale * g * u ** (1.0 / shape)


def _poisson_inversion_table(lam: float) -> np.ndarray:
    t = math.exp(-lam)
    cum = t
    cdf = [cum]
    k = 0
    while cum < 1.0 - 1e-16 and k < 10000:
        k += 1
        t *= lam / k
        cum += t
        cdf.append(cum)
    return np.array(cdf)


def _sample_poisson_ptrs(gen: np.random.Generator, n: int, lam: float) -> np.ndarray:
    """Transformed rejection with squeeze for large rates; the proposal is a
    shifted logistic matched to the normal approximation of the pmf."""
    b = 0.931 + 2.53 * math.sqrt(lam)
    a = -0.059 + 0.02483 * b
    inv_alpha = 1.1239 + 1.1328 / (b - 3.4)
    v_r = 0.9277 - 3.6224 / (b - 2.0)
    log_lam = math.log(lam)
    kmax = int(lam + 40.0 * math.sqrt(lam) + 200.0)
    log_fact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, kmax + 1)))))
    out = np.empty(n)
    filled = 0
    while filled < n:
        m = max(2 * (n - filled), 1024)
        u = gen.random(m) - 0.5
        v = gen.random(m)
        us = 0.5 - np.abs(u)
        kk = np.floor((2.0 * a / us + b) * u + lam + 0.43)
        valid = (kk >= 0) & (kk <= kmax)
        fast = valid & (us >= 0.07) & (v <= v_r)
        dead = (~valid) | ((us < 0.013) & (v > us))
        ki = kk.astype(np.int64).clip(0, kmax)
        with np.errstate(divide="ignore", invalid="ignore"):
            lhs = np.log(v * inv_alpha / (a / (us * us) + b))
        slow = (~fast) & (~dead) & (lhs <= kk * log_lam - lam - log_fact[ki])
        acc = fast | slow
        vals = kk[acc]
        take = min(vals.size, n - filled)
        out[filled:filled + take] = vals[:take]
        filled += take
    return out


def _sample_stream(spec: DistributionSpec, gen: np.random.Generator, n: int) -> np.ndarray:
    fam, p = spec.family, spec.params
    if fam == "exponential":
        return -np.log1p(-gen.random(n)) / p[0]
    if fam == "normal":
        return p[0] + p[1] * _polar_normal(gen, n)
    if fam == "gamma":
        return _sample_gamma(gen, n, p[0], p[1])
    if fam == "poisson":
        lam = p[0]
        if lam <= 30.0:
            cdf = _poisson_inversion_table(lam)
            out = np.empty(n)
            filled = 0
            while filled < n:
                m = min(_CHUNK, n - filled)
                out[filled:filled + m] = np.searchsorted(cdf, gen.random(m), side="right")
                filled += m
            return out
        return _sample_poisson_ptrs(gen, n, lam)
    raise ArgumentError(f"no sampler for family {fam!r}")


def sample(spec: DistributionSpec, seed: int, n: int, stream: int = 0) -> np.ndarray:
    """Draw n variates; bitwise-deterministic given (spec, seed, n, stream)."""
    if n < 1:
        raise ArgumentError(f"need n >= 1 samples, got {n}")
    return _sample_stream(spec, _generator(seed, stream), int(n))


def wilson_interval(hits: int, n: int, confidence: float) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion.

    Chosen over the normal interval because the proportions under study
    are tail probabilities near zero, where the normal interval
    misbehaves.
    """
    if not 0.0 < confidence < 1.0:
        raise ArgumentError(f"confidence must be in (0, 1), got {confidence}")
    if n < 1:
        raise ArgumentError(f"need n >= 1 trials, got {n}")
    z = NormalDist().inv_cdf(0.5 + 0.5 * confidence)
    p = hits / n
    z2n = z * z / n
    denom = 1.0 + z2n
    center = (p + 0.5 * z2n) / denom
    half = z * math.sqrt(p * (1.0 - p) / n + 0.25 * z2n / n) / denom
    # boundary counts have exact endpoints; don't leave them to cancellation
    lo = 0.0 if hits == 0 else max(0.0, center - half)
    hi = 1.0 if hits == n else min(1.0, center + half)
    return lo, hi


def empirical_tail(samples: np.ndarray, y: float, confidence: float = 0.999) -> McEstimate:
    """Empirical P(X >= y) with its Wilson interval at the given confidence."""
    s = np.asarray(samples)
    if s.size == 0:
        raise ArgumentError("empty sample set")
    hits = int((s >= y).sum())
    n = int(s.size)
    lo, hi = wilson_interval(hits, n, confidence)
    return McEstimate(y=y, n=n, hits=hits, p_hat=hits / n, ci_lo=lo, ci_hi=hi,
                      confidence=confidence)
