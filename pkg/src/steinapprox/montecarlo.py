"""Seeded Monte Carlo estimates of Delta(n) = E h(g(W)) - E h(g(Z)).

``W`` has one coordinate per block, ``W_j = n_j^(-1/2) sum_i X_ij``.  The
reference ``E h(g(Z))`` is computed by quadrature for ``g.dim <= 2`` and
treated as exact, which halves the variance of the estimated difference.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

import numpy as np
from scipy import stats

from .distributions import DistributionSpec, get_distribution
from .errors import DimensionError, DomainError, InsufficientSignalError
from .gfunctions import GFunction
from .quadrature import gauss_expect_1d, hermite_expect_checked
from .sampling import MCEstimate, mc_mean
from .stein_bounds import evaluate_bound
from .testfunctions import TestFunction

DEFAULT_N_GRID = (16, 32, 64, 128, 256)
DEFAULT_SAMPLES = 10_000_000
SIGNIFICANCE = 3.0


def _blocks(g: GFunction, dist, n) -> tuple[list[DistributionSpec], list[int]]:
    dists = dist if isinstance(dist, (list, tuple)) else [dist] * g.dim
    dists = [get_distribution(x) for x in dists]
    ns = list(n) if isinstance(n, (list, tuple)) else [int(n)] * g.dim
    if len(dists) != g.dim or len(ns) != g.dim:
        raise DomainError(f"{g.name} needs {g.dim} coordinate blocks")
    return dists, [int(v) for v in ns]


def sample_W(dists: Sequence[DistributionSpec], ns: Sequence[int], rng: np.random.Generator,
             count: int) -> np.ndarray:
    """``count`` draws of the block-normalized vector W, shape (count, d)."""
    cols = [dist.sample_sum(nj, rng, count) / math.sqrt(nj) for dist, nj in zip(dists, ns)]
    return np.stack(cols, axis=-1)


def _stream_id(dists, ns) -> str:
    return "W:" + ";".join(f"{x.name}@{nj}" for x, nj in zip(dists, ns))


def estimate_EhgW(g: GFunction, h: TestFunction, dist, n, N: int, seed: int,
                  stream_id: str | None = None, jobs: int | None = None) -> MCEstimate:
    """Sample mean of h(g(W)) over N independent realizations of W."""
    if N < 1000:
        raise DomainError("N must be at least 1000")
    dists, ns = _blocks(g, dist, n)
    sid = stream_id or _stream_id(dists, ns)

    def draw(rng, count):
        return h(g.func(sample_W(dists, ns, rng, count)))

    return mc_mean(draw, N, seed, sid, jobs)


_REFERENCE_CACHE: dict[tuple, MCEstimate] = {}


def _cache_key(g, h, method, N, seed):
    return (g.name, repr(sorted(g.params.items())), h.name, repr(sorted(h.params.items())),
            method, N, seed)


def reference_EhgZ(g: GFunction, h: TestFunction, method: str = "quadrature",
                   N: int | None = None, seed: int = 0, jobs: int | None = None) -> MCEstimate:
    """E h(g(Z)); stderr is 0 for quadrature.  Results are cached per (g, h, method)."""
    key = _cache_key(g, h, method, N, seed)
    if key in _REFERENCE_CACHE:
        return _REFERENCE_CACHE[key]
    if h.name == "constant":
        est = MCEstimate(float(h(0.0)), 0.0, 0, seed, "reference:constant")
    elif method == "quadrature":
        if g.dim > 2:
            raise DimensionError(f"quadrature reference supports dim <= 2, got {g.dim}")
        if g.dim == 1:
            val = gauss_expect_1d(lambda z: h(g.func(z[:, None])), tol=1e-11)
        else:
            val = hermite_expect_checked(lambda z: h(g.func(z)), g.dim, nodes=64, tol=1e-9)
        est = MCEstimate(val, 0.0, 0, seed, "reference:quadrature")
    elif method == "mc":
        if N is None:
            raise DomainError("mc reference needs N")

        def draw(rng, count):
            return h(g.func(rng.standard_normal((count, g.dim))))

        est = mc_mean(draw, N, seed, f"reference:{g.name}:{h.name}", jobs)
    else:
        raise DomainError(f"unknown reference method {method!r}")
    _REFERENCE_CACHE[key] = est
    return est


def distance(g: GFunction, h: TestFunction, dist, n, N: int, seed: int,
             jobs: int | None = None) -> MCEstimate:
    """Delta-hat(n) = estimate_EhgW - reference_EhgZ with stderrs combined in quadrature."""
    w = estimate_EhgW(g, h, dist, n, N, seed, jobs=jobs)
    if g.dim <= 2:
        ref = reference_EhgZ(g, h)
    else:
        ref = reference_EhgZ(g, h, method="mc", N=4 * N, seed=seed + 1, jobs=jobs)
    return MCEstimate(w.mean - ref.mean, math.hypot(w.stderr, ref.stderr), w.n_samples,
                      seed, w.stream_id)


@dataclass(frozen=True)
class RatePoint:
    n: int
    delta: float
    stderr: float

    @property
    def abs_delta(self) -> float:
        return abs(self.delta)

    @property
    def significant(self) -> bool:
        return self.abs_delta > SIGNIFICANCE * self.stderr


@dataclass
class RateFit:
    """Least-squares slope of log|Delta| on log n over significant points."""

    points: list[RatePoint]
    slope: float
    intercept: float
    slope_stderr: float
    excluded: list[RatePoint] = field(default_factory=list)

    @property
    def used(self) -> list[RatePoint]:
        return [p for p in self.points if p not in self.excluded]

    def to_dict(self) -> dict[str, Any]:
        return {"points": [asdict(p) for p in self.points], "slope": self.slope,
                "intercept": self.intercept, "slope_stderr": self.slope_stderr,
                "excluded": [p.n for p in self.excluded]}


def _check_grid(n_grid: Sequence[int]):
    if len(n_grid) < 4:
        raise DomainError("rate fits need an n grid with at least 4 points")
    ratios = [b / a for a, b in zip(n_grid[:-1], n_grid[1:])]
    if min(ratios) <= 1 or max(ratios) / min(ratios) > 1 + 1e-9:
        raise DomainError(f"n grid must be geometric and increasing, got {list(n_grid)}")


def fit_points(points: Sequence[RatePoint]) -> RateFit:
    """Fit the slope from precomputed points; raises if < 3 are significant."""
    points = list(points)
    used = [p for p in points if p.significant]
    excluded = [p for p in points if not p.significant]
    if len(used) < 3:
        raise InsufficientSignalError(
            f"only {len(used)} of {len(points)} points exceed {SIGNIFICANCE:g} stderr", points)
    x = np.log([p.n for p in used])
    y = np.log([p.abs_delta for p in used])
    res = stats.linregress(x, y)
    return RateFit(points, float(res.slope), float(res.intercept), float(res.stderr), excluded)


def rate_fit(g: GFunction, h: TestFunction, dist, n_grid: Sequence[int] = DEFAULT_N_GRID,
             N: int = DEFAULT_SAMPLES, seed: int = 0, jobs: int | None = None) -> RateFit:
    """Empirical convergence exponent of |Delta(n)|."""
    _check_grid(n_grid)
    points = []
    for n in n_grid:
        est = distance(g, h, dist, n, N, seed, jobs=jobs)
        points.append(RatePoint(int(n), est.mean, est.stderr))
    return fit_points(points)


@dataclass(frozen=True)
class ValidityRow:
    n: int
    delta_mean: float
    delta_stderr: float
    bound_total: float
    N: int
    seed: int

    @property
    def margin(self) -> float:
        """bound - (|Delta-hat| - 3 stderr); negative means a violation."""
        return self.bound_total - (abs(self.delta_mean) - SIGNIFICANCE * self.delta_stderr)

    @property
    def ok(self) -> bool:
        return self.margin >= 0


@dataclass
class ValidityReport:
    bound_id: str
    rows: list[ValidityRow]

    @property
    def all_ok(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def violations(self) -> list[ValidityRow]:
        return [r for r in self.rows if not r.ok]


def bound_validity(g: GFunction, h: TestFunction, dist, n_grid: Sequence[int], theorem_id: str,
                   N: int = DEFAULT_SAMPLES, seed: int = 0, p: int | None = None,
                   jobs: int | None = None) -> ValidityReport:
    """Compare |Delta-hat(n)| - 3 stderr with the bound at each n.

    Violations are recorded in the report, not raised.
    """
    rows = []
    for n in n_grid:
        dists, ns = _blocks(g, dist, n)
        report = evaluate_bound(theorem_id, dists=dists, n=ns, g=g, h_norms=h.norms, p=p)
        est = distance(g, h, dists, ns, N, seed, jobs=jobs)
        rows.append(ValidityRow(int(n), est.mean, est.stderr, report.total, N, seed))
    return ValidityReport(theorem_id, rows)
