"""Stirling numbers of the second kind and the Faa di Bruno constant h_n.

The constant ``h_n = sum_k S(n, k) * ||h^(k)||`` bounds the n-th derivative
of a composite ``h(g(w))`` by ``h_n * P(w)`` whenever ``P`` dominates the
derivatives of ``g``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import RangeError

MAX_STIRLING_N = 25


@lru_cache(maxsize=None)
def _stirling_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _stirling_row(n - 1)
    row = [0] * (n + 1)
    for k in range(1, n + 1):
        left = prev[k] if k < len(prev) else 0
        row[k] = k * left + prev[k - 1]
    return tuple(row)


def stirling2(n: int, k: int) -> int:
    """Number of partitions of an n-set into k non-empty blocks.

    Exact integer arithmetic via S(n, k) = k S(n-1, k) + S(n-1, k-1).
    """
    if not (isinstance(n, int) and isinstance(k, int)):
        raise TypeError("stirling2 expects integers")
    if n < 0 or n > MAX_STIRLING_N:
        raise RangeError(f"n={n} outside 0..{MAX_STIRLING_N}")
    if k < 0 or k > n:
        raise RangeError(f"k={k} outside 0..n={n}")
    return _stirling_row(n)[k]


@dataclass(frozen=True)
class DerivNormProfile:
    """Sup-norms ``||h^(k)||`` of a test function, for k = 1..K.

    ``norms[0]`` holds ``||h'||``; use :meth:`norm` for 1-based access.
    """

    norms: tuple[float, ...]

    def __init__(self, norms: Sequence[float]):
        values = tuple(float(v) for v in norms)
        if any(not v >= 0 for v in values):
            raise ValueError("derivative norms must be non-negative")
        object.__setattr__(self, "norms", values)

    def __len__(self) -> int:
        return len(self.norms)

    @property
    def order(self) -> int:
        return len(self.norms)

    def norm(self, k: int) -> float:
        if k < 1 or k > len(self.norms):
            raise RangeError(f"no norm stored for derivative order {k}")
        return self.norms[k - 1]

    def truncated(self, order: int) -> "DerivNormProfile":
        return DerivNormProfile(self.norms[:order])

    def to_list(self) -> list[float]:
        return list(self.norms)


def h_n(n: int, profile: DerivNormProfile | Sequence[float]) -> float:
    """Faa di Bruno constant ``sum_{k=1}^n S(n, k) ||h^(k)||``."""
    if not isinstance(profile, DerivNormProfile):
        profile = DerivNormProfile(profile)
    if n < 1:
        raise RangeError(f"h_n needs n >= 1, got {n}")
    if len(profile) < n:
        raise RangeError(
            f"norm profile has {len(profile)} entries, h_{n} needs {n}")
    return float(sum(stirling2(n, k) * profile.norm(k) for k in range(1, n + 1)))
