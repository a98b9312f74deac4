"""Moments of the normalized sum W = n^(-1/2) (X_1 + ... + X_n).

Raw moments are exact: cumulants scale as ``kappa_j(W) = kappa_j(X) n^(1-j/2)``
and moments are rebuilt from cumulants, an O(1)-in-n dynamic program.
Odd and fractional absolute moments use the Lyapunov surrogate
``E|W|^r <= (E W^s)^(r/s)`` with ``s`` the smallest even integer >= r.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import DistributionSpec, get_distribution
from .errors import RangeError
from .sampling import MCEstimate, mc_mean

MAX_W_ORDER = 8


def cumulants_from_moments(moments: list[float]) -> list[float]:
    """kappa_0..kappa_K from raw moments m_0..m_K (m_0 = 1)."""
    K = len(moments) - 1
    kappa = [0.0] * (K + 1)
    for k in range(1, K + 1):
        acc = moments[k] - math.fsum(math.comb(k - 1, j - 1) * kappa[j] * moments[k - j]
                                     for j in range(1, k))
        kappa[k] = acc
    return kappa


def moments_from_cumulants(kappa: list[float]) -> list[float]:
    K = len(kappa) - 1
    m = [1.0] + [0.0] * K
    for k in range(1, K + 1):
        m[k] = math.fsum(math.comb(k - 1, j - 1) * kappa[j] * m[k - j] for j in range(1, k + 1))
    return m


def _check_order(k, top=MAX_W_ORDER):
    if k < 0:
        raise RangeError(f"moment order must be non-negative, got {k}")
    if k > top:
        raise RangeError(f"moment order {k} exceeds {top}")


def exact_moment_W(dist, n: int, k: int) -> float:
    """Exact E W^k for k <= 8."""
    dist = get_distribution(dist)
    _check_order(k)
    if n < 1:
        raise ValueError("n must be positive")
    if k <= 2:
        return (1.0, 0.0, 1.0)[k]
    kx = cumulants_from_moments([dist.moment(j) for j in range(k + 1)])
    kw = [0.0] + [kx[j] * n ** (1 - j / 2) for j in range(1, k + 1)]
    kw[1], kw[2] = 0.0, 1.0
    return moments_from_cumulants(kw)[k]


def abs_moment_W_upper(dist, n: int, r: float) -> float:
    """A valid upper bound for E|W|^r, exact when r is an even integer."""
    _check_order(r)
    if r == 0:
        return 1.0
    s = 2 * math.ceil(r / 2)
    even = exact_moment_W(dist, n, s)
    if s == r:
        return even
    return even ** (r / s)


def mc_abs_moment_W(dist, n: int, r: float, N: int, seed: int,
                    jobs: int | None = None) -> MCEstimate:
    """Monte Carlo estimate of E|W|^r."""
    dist = get_distribution(dist)
    if N < 1000:
        raise ValueError("N must be at least 1000")
    scale = 1.0 / math.sqrt(n)

    def draw(rng, count):
        w = dist.sample_sum(n, rng, count) * scale
        return np.abs(w) ** r

    return mc_mean(draw, N, seed, f"absW:{dist.name}:n={n}:r={r:g}", jobs)


@dataclass
class SumMomentTable:
    """Cached exact raw moments and Lyapunov upper bounds of W."""

    dist: DistributionSpec
    n: int
    exact_moments: dict[int, float] = field(default_factory=dict)
    abs_upper: dict[float, float] = field(default_factory=dict)

    def __post_init__(self):
        self.dist = get_distribution(self.dist)
        if not self.exact_moments:
            self.exact_moments = {k: exact_moment_W(self.dist, self.n, k)
                                  for k in range(MAX_W_ORDER + 1)}

    def moment(self, k: int) -> float:
        if k not in self.exact_moments:
            self.exact_moments[k] = exact_moment_W(self.dist, self.n, k)
        return self.exact_moments[k]

    def abs_moment(self, r: float) -> float:
        r = float(r)
        if r not in self.abs_upper:
            self.abs_upper[r] = abs_moment_W_upper(self.dist, self.n, r)
        return self.abs_upper[r]
