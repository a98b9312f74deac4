"""Chunked, seeded Monte Carlo means that do not depend on worker count.

A run of ``N`` draws is split into fixed-size chunks.  Chunk ``i`` draws
from its own substream ``(seed, stream_id, i)``, reduces to
``(count, mean, M2)``, and the chunk summaries are merged pairwise in chunk
order.  The result is bit-identical for any ``jobs`` value.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .rng import GENERATOR_NAME, make_stream

CHUNK_SIZE = 1 << 18


@dataclass(frozen=True)
class MCEstimate:
    """A Monte Carlo mean with its standard error and provenance."""

    mean: float
    stderr: float
    n_samples: int
    seed: int
    stream_id: str
    generator: str = GENERATOR_NAME

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class _Moments:
    count: int
    mean: float
    m2: float

    @classmethod
    def of(cls, x: np.ndarray) -> "_Moments":
        x = np.asarray(x, dtype=float)
        # shifting by the first draw keeps constant inputs exactly constant
        shift = x[0]
        dev = x - shift
        mdev = float(np.mean(dev))
        m2 = float(np.sum((dev - mdev) ** 2))
        return cls(x.size, float(shift + mdev), m2)

    def merge(self, other: "_Moments") -> "_Moments":
        n = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * (other.count / n)
        m2 = self.m2 + other.m2 + delta * delta * (self.count * other.count / n)
        return _Moments(n, mean, m2)


def _pairwise(parts: list[_Moments]) -> _Moments:
    while len(parts) > 1:
        nxt = [parts[i].merge(parts[i + 1]) for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            nxt.append(parts[-1])
        parts = nxt
    return parts[0]


def default_jobs() -> int:
    return max(1, min(8, os.cpu_count() or 1))


def mc_mean(draw: Callable[[np.random.Generator, int], np.ndarray], n_samples: int,
            seed: int, stream_id: str, jobs: int | None = None,
            chunk_size: int = CHUNK_SIZE) -> MCEstimate:
    """Estimate ``E draw(...)`` from ``n_samples`` values.

    ``draw(rng, count)`` must return ``count`` iid realizations.
    """
    if n_samples < 2:
        raise ValueError("need at least two samples for a standard error")
    n_chunks = -(-n_samples // chunk_size)

    def run(i: int) -> _Moments:
        count = min(chunk_size, n_samples - i * chunk_size)
        return _Moments.of(draw(make_stream(seed, stream_id, i), count))

    jobs = default_jobs() if jobs is None else max(1, int(jobs))
    if jobs == 1 or n_chunks == 1:
        parts = [run(i) for i in range(n_chunks)]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(run, range(n_chunks)))
    total = _pairwise(parts)
    var = total.m2 / (total.count - 1)
    return MCEstimate(total.mean, math.sqrt(var / total.count), total.count, seed, stream_id)
