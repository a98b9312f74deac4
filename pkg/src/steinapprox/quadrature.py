"""Gaussian expectations and finite-difference derivatives.

Two rules are used.  Tensor Gauss-Hermite handles smooth, slowly varying
integrands in one or two dimensions.  One-dimensional expectations of
rapidly oscillating integrands (``sin(z^3)`` and its derivatives) defeat
Gauss-Hermite, so those use composite Gauss-Legendre on ``[-L, L]`` against
the normal density, with panel doubling as the error estimate.
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import roots_hermitenorm, roots_legendre

from .errors import AccuracyError

TAIL = 12.0  # P(|Z| > 12) < 1e-32


@lru_cache(maxsize=64)
def hermite_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and probability weights for E f(Z), Z ~ N(0, 1)."""
    x, w = roots_hermitenorm(n)
    return x, w / math.sqrt(2 * math.pi)


@lru_cache(maxsize=64)
def legendre_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    return roots_legendre(n)


@lru_cache(maxsize=32)
def composite_normal_rule(panels: int, per_panel: int = 20,
                          tail: float = TAIL) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes on [-tail, tail] weighted by phi(z)."""
    x, w = legendre_rule(per_panel)
    edges = np.linspace(-tail, tail, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    weights = weights * np.exp(-0.5 * nodes ** 2) / math.sqrt(2 * math.pi)
    return nodes, weights


def gauss_expect_1d(fn: Callable[[np.ndarray], np.ndarray], tol: float = 1e-10,
                    panels: int = 120, max_panels: int = 3840) -> float:
    """E fn(Z) by composite Gauss-Legendre, doubling panels until stable."""
    prev = None
    p = panels
    gap = math.inf
    while p <= max_panels:
        x, w = composite_normal_rule(p)
        val = float(np.dot(w, fn(x)))
        if prev is not None:
            gap = abs(val - prev)
            if gap <= tol * max(1.0, abs(val)):
                return val
        prev = val
        p *= 2
    raise AccuracyError("composite Gaussian quadrature did not converge", gap)


def hermite_expect(fn: Callable[[np.ndarray], np.ndarray], dim: int, nodes: int) -> float:
    """E fn(Z) over Z ~ N(0, I_dim) by a tensor Gauss-Hermite rule.

    ``fn`` receives an array of shape (m, dim).
    """
    x, w = hermite_rule(nodes)
    grids = np.meshgrid(*([x] * dim), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    wts = np.ones(pts.shape[0])
    for wg in np.meshgrid(*([w] * dim), indexing="ij"):
        wts = wts * wg.ravel()
    return float(np.dot(wts, fn(pts)))


def hermite_expect_checked(fn, dim: int, nodes: int = 64, tol: float = 1e-8,
                           max_nodes: int = 512) -> float:
    """Tensor Gauss-Hermite with node doubling until two rules agree to ``tol``."""
    prev = hermite_expect(fn, dim, nodes)
    n = nodes
    while n < max_nodes:
        n *= 2
        if dim >= 2 and n > 256:
            break
        val = hermite_expect(fn, dim, n)
        if abs(val - prev) <= tol * max(1.0, abs(val)):
            return val
        prev = val
    raise AccuracyError("Gauss-Hermite rule did not converge", abs(val - prev))


# -- finite differences ------------------------------------------------------

_CENTRAL = {
    1: (np.array([-1.0, 1.0]), np.array([-0.5, 0.5])),
    2: (np.array([-1.0, 0.0, 1.0]), np.array([1.0, -2.0, 1.0])),
    3: (np.array([-2.0, -1.0, 1.0, 2.0]), np.array([-0.5, 1.0, -1.0, 0.5])),
    4: (np.array([-2.0, -1.0, 0.0, 1.0, 2.0]), np.array([1.0, -4.0, 6.0, -4.0, 1.0])),
}


def central_difference(fn: Callable[[np.ndarray], np.ndarray], x, order: int,
                       step: float) -> np.ndarray:
    """Richardson-extrapolated central difference of ``fn`` at ``x``.

    ``fn`` must be vectorized.  Combining steps ``h`` and ``h/2`` removes
    the O(h^2) term, leaving O(h^4) truncation error.
    """
    if order == 0:
        return fn(np.asarray(x, dtype=float))
    offs, coef = _CENTRAL[order]
    x = np.asarray(x, dtype=float)

    def at(h):
        pts = x[..., None] + offs * h
        return fn(pts) @ coef / h ** order

    return (4 * at(step / 2) - at(step)) / 3


def fd_points(order: int, step: float) -> tuple[np.ndarray, np.ndarray]:
    """Offsets and weights of the extrapolated stencil as one linear functional."""
    offs, coef = _CENTRAL[order]
    all_offs = np.concatenate([offs * step, offs * step / 2])
    all_coef = np.concatenate([-coef / step ** order / 3,
                               4 * coef / (step / 2) ** order / 3])
    return all_offs, all_coef
