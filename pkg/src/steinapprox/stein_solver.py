"""Numerical solution of the Stein equation f'' - w.grad f = h(g(w)) - E h(g(Z)).

The solution is the Ornstein-Uhlenbeck integral
``f(w) = -int_0^inf [E H(e^-s w + sqrt(1-e^-2s) Z) - E H(Z)] ds`` with
``H = h o g``.  Substituting ``e^-s = u = cos(theta)`` gives

    f(w) = -int_0^{pi/2} [E H(cos(t) w + sin(t) Z) - E H(Z)] tan(t) dt,

whose integrand is analytic on the closed interval (the bracket vanishes to
first order at ``t = pi/2``).  A fixed Gauss-Legendre rule in ``t`` is
therefore spectrally accurate, and, being fixed, makes the computed ``f`` a
smooth function of ``w`` so central differences of it are clean.  The error
is estimated by re-evaluating with a coarser rule.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from numpy.polynomial.hermite_e import hermeval

from .errors import AccuracyError, DimensionError, DomainError, HypothesisError
from .gfunctions import GFunction
from .quadrature import (central_difference, composite_normal_rule, gauss_expect_1d,
                         hermite_rule, legendre_rule)
from .testfunctions import TestFunction

MAX_DIM = 2


@dataclass(frozen=True)
class SolverConfig:
    """Quadrature and differencing settings.

    ``outer_nodes``: Gauss-Legendre nodes in the angle ``t`` (``u = cos t``).
    ``inner_nodes``: Gauss-Hermite nodes per dimension (d = 2).
    ``inner_panels``: composite Gauss-Legendre panels on [-12, 12] (d = 1).
    """

    outer_nodes: int = 96
    inner_nodes: int = 64
    inner_panels: int = 240
    fd_step: float = 2e-3
    tol: float = 1e-6
    check_accuracy: bool = True

    def __post_init__(self):
        if self.outer_nodes < 32 or self.inner_nodes < 32 or self.inner_panels < 32:
            raise DomainError("node counts must be at least 32")
        if not 1e-5 <= self.fd_step <= 1e-2:
            raise DomainError(f"fd_step must lie in [1e-5, 1e-2], got {self.fd_step}")

    def coarser(self) -> "SolverConfig":
        return SolverConfig(max(32, round(0.75 * self.outer_nodes)),
                            max(32, round(0.75 * self.inner_nodes)),
                            max(32, round(0.75 * self.inner_panels)),
                            self.fd_step, self.tol, False)

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_CONFIG = SolverConfig()


def composite(g: GFunction, h: TestFunction) -> Callable[[np.ndarray], np.ndarray]:
    """H = h o g acting on points of shape (..., d)."""
    return lambda x: h(g.func(x))


def composite_1d(g: GFunction, h: TestFunction) -> Callable[[np.ndarray], np.ndarray]:
    """H = h o g acting on an array of scalars (d = 1)."""
    return lambda x: h(g.func(x[..., None]))


def _check_dim(g: GFunction):
    if g.dim > MAX_DIM:
        raise DimensionError(f"solver supports d <= {MAX_DIM}, got d = {g.dim}")


def _inner_rule(dim: int, cfg: SolverConfig):
    if dim == 1:
        z, wz = composite_normal_rule(cfg.inner_panels)
        return z[:, None], wz
    x, w = hermite_rule(cfg.inner_nodes)
    gx, gy = np.meshgrid(x, x, indexing="ij")
    wx, wy = np.meshgrid(w, w, indexing="ij")
    return np.stack([gx.ravel(), gy.ravel()], axis=-1), (wx * wy).ravel()


def _outer_rule(cfg: SolverConfig):
    x, w = legendre_rule(cfg.outer_nodes)
    t = 0.25 * math.pi * (x + 1)
    return t, 0.25 * math.pi * w


def _ou_integral(func: Callable, weight: Callable[[np.ndarray], np.ndarray],
                 points: np.ndarray, dim: int, cfg: SolverConfig) -> np.ndarray:
    """int_0^{pi/2} weight(t) [E func(cos t w + sin t Z) - E func(Z)] dt per point w."""
    z, wz = _inner_rule(dim, cfg)
    t, wt = _outer_rule(cfg)
    wt = wt * weight(t)
    cos_t, sin_t = np.cos(t), np.sin(t)
    centre = float(np.dot(wz, func(z)))
    out = np.empty(points.shape[0])
    for i, w in enumerate(points):
        args = cos_t[:, None, None] * w[None, None, :] + sin_t[:, None, None] * z[None, :, :]
        vals = func(args) @ wz
        out[i] = np.dot(wt, vals - centre)
    return out


def _as_points(w, dim: int) -> tuple[np.ndarray, tuple]:
    w = np.asarray(w, dtype=float)
    if dim == 1:
        if w.ndim >= 1 and w.shape[-1:] == (1,) and w.ndim > 1:
            w = w[..., 0]
        shape = w.shape
        return w.reshape(-1, 1), shape
    if w.shape[-1] != dim:
        raise DimensionError(f"points must have trailing dimension {dim}")
    shape = w.shape[:-1]
    return w.reshape(-1, dim), shape


def _f_values(points, g, h, cfg) -> np.ndarray:
    return -_ou_integral(composite(g, h), np.tan, points, g.dim, cfg)


def _certify(exact: np.ndarray, points, evaluate, cfg: SolverConfig, what: str):
    if not cfg.check_accuracy:
        return
    rough = evaluate(points, cfg.coarser())
    est = float(np.max(np.abs(exact - rough))) if exact.size else 0.0
    if est > cfg.tol:
        raise AccuracyError(f"{what}: quadrature could not certify tol={cfg.tol:g}", est)


def solve_f(w, g: GFunction, h: TestFunction, cfg: SolverConfig = DEFAULT_CONFIG):
    """Value of the Stein solution f at ``w`` (scalar or array of points)."""
    _check_dim(g)
    pts, shape = _as_points(w, g.dim)
    vals = _f_values(pts, g, h, cfg)
    _certify(vals, pts, lambda p, c: _f_values(p, g, h, c), cfg, "solve_f")
    return float(vals[0]) if shape == () else vals.reshape(shape)


def reference_value(g: GFunction, h: TestFunction, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """E h(g(Z)) with the solver's inner rule (the constant in the equation)."""
    z, wz = _inner_rule(g.dim, cfg)
    return float(np.dot(wz, composite(g, h)(z)))


def f_derivative(k: int, w, g: GFunction, h: TestFunction,
                 cfg: SolverConfig = DEFAULT_CONFIG):
    """f^{(k)}(w) for d = 1 by extrapolated central differences of f."""
    if g.dim != 1:
        raise DimensionError("f_derivative is univariate")
    x = np.atleast_1d(np.asarray(w, dtype=float))
    fn = lambda pts: _f_values(pts.reshape(-1, 1), g, h, cfg).reshape(pts.shape)
    out = central_difference(fn, x, k, cfg.fd_step)
    if cfg.check_accuracy:
        _certify(_f_values(x.reshape(-1, 1), g, h, cfg), x.reshape(-1, 1),
                 lambda p, c: _f_values(p, g, h, c), cfg, "f_derivative")
    return float(out[0]) if np.ndim(w) == 0 else out


def stein_residual(w, g: GFunction, h: TestFunction, cfg: SolverConfig = DEFAULT_CONFIG):
    """|f''(w) - w.grad f(w) - (h(g(w)) - E h(g(Z)))| with FD derivatives (d <= 2)."""
    _check_dim(g)
    pts, shape = _as_points(w, g.dim)
    H = composite(g, h)
    centre = reference_value(g, h, cfg)
    step = cfg.fd_step
    fvals = lambda p: _f_values(p, g, h, cfg)
    lhs = np.zeros(pts.shape[0])
    for axis in range(g.dim):
        e = np.zeros(g.dim)
        e[axis] = 1.0

        def along(x, e=e):
            # x has shape (m, s): offsets along one axis from each base point
            m, s = x.shape
            p = pts[:, None, :] + (x - pts[:, axis:axis + 1])[..., None] * e
            return fvals(p.reshape(-1, g.dim)).reshape(m, s)

        base = pts[:, axis]
        d2 = central_difference(along, base, 2, step)
        d1 = central_difference(along, base, 1, step)
        lhs += d2 - base * d1
    rhs = H(pts) - centre
    if cfg.check_accuracy:
        _certify(fvals(pts), pts, lambda p, c: _f_values(p, g, h, c), cfg, "stein_residual")
    res = np.abs(lhs - rhs)
    return float(res[0]) if shape == () else res.reshape(shape)


def expected_derivative_at_Z(k: int, g: GFunction, h: TestFunction,
                             cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """E f^{(k)}(Z) computed as -(1/k) E[(h o g)^{(k)}(Z)] (d = 1, k <= 4)."""
    if g.dim != 1:
        raise DimensionError("expected_derivative_at_Z is univariate")
    if not 1 <= k <= 4:
        raise DomainError("derivative order must lie in 1..4")
    H = composite_1d(g, h)
    integrand = lambda z: central_difference(H, z, k, cfg.fd_step)
    # FD rounding contributes ~1e-8 per node, so convergence is judged at 1e-7
    return -gauss_expect_1d(integrand, tol=1e-7) / k


def _psi_values(m, points, g, h, cfg) -> np.ndarray:
    # E H^(m)(c w + s Z) = s^-m E[He_m(Z) H(c w + s Z)] (Gaussian integration by
    # parts), so no finite differences enter and psi stays smooth in w
    H = composite(g, h)
    z, wz = _inner_rule(1, cfg)
    herm = hermeval(z[:, 0], [0] * m + [1])
    t, wt = _outer_rule(cfg)
    cos_t, sin_t = np.cos(t), np.sin(t)
    wt = wt * np.tan(t) * (1 - cos_t ** m) / (m * sin_t ** m)
    centre = float(np.dot(wz * herm, H(z)))
    out = np.empty(points.shape[0])
    for i, w in enumerate(points):
        args = cos_t[:, None, None] * w[None, None, :] + sin_t[:, None, None] * z[None, :, :]
        vals = H(args) @ (wz * herm)
        out[i] = np.dot(wt, vals - centre)
    return out


def solve_psi(m: int, w, g: GFunction, h: TestFunction, cfg: SolverConfig = DEFAULT_CONFIG):
    """psi_m solving psi'' - w psi' = f^{(m)} for even g and odd m (d = 1).

    Writing f^{(m)} through the semigroup and swapping integrals collapses
    the double integral to
    ``psi_m(w) = int_0^inf (1 - e^{-m s})/m [E H^{(m)}(e^-s w + ...) - E H^{(m)}(Z)] ds``.
    Its residual against f^{(m)} from differences of :func:`solve_f` is an
    independent check (:func:`psi_residual`).
    """
    if g.dim != 1:
        raise DimensionError("solve_psi is univariate")
    if m < 1 or m % 2 == 0:
        raise HypothesisError("m odd", f"got m = {m}; the right-hand side is not centred")
    if not g.is_even:
        raise HypothesisError("g even", f"{g.name} is not even; E f^(m)(Z) need not vanish")
    pts, shape = _as_points(w, 1)
    vals = _psi_values(m, pts, g, h, cfg)
    _certify(vals, pts, lambda p, c: _psi_values(m, p, g, h, c), cfg, "solve_psi")
    return float(vals[0]) if shape == () else vals.reshape(shape)


def psi_residual(m: int, w, g: GFunction, h: TestFunction, cfg: SolverConfig = DEFAULT_CONFIG):
    """|psi''(w) - w psi'(w) - f^{(m)}(w)|, each side by independent routes."""
    x = np.atleast_1d(np.asarray(w, dtype=float))
    solve_psi(m, x, g, h, cfg)  # validates hypotheses and certifies accuracy
    fn = lambda pts: _psi_values(m, pts.reshape(-1, 1), g, h, cfg).reshape(pts.shape)
    lhs = central_difference(fn, x, 2, cfg.fd_step) - x * central_difference(fn, x, 1, cfg.fd_step)
    rhs = f_derivative(m, x, g, h, cfg)
    res = np.abs(lhs - rhs)
    return float(res[0]) if np.ndim(w) == 0 else res
