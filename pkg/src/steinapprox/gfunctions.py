"""Functions g: R^d -> R with the metadata the bounds consume.

A function lies in the class of order ``n`` for a dominating function ``P``
when every partial derivative of order ``k <= n`` satisfies
``|d^k g(w)|^(n/k) <= P(w)``.  Because the admissible ``P`` changes with
``n``, each :class:`GFunction` carries a rule ``order -> dominating``.

Preset rules are analytic certificates.  Every addend ``c |w|^e`` with
``e <= r`` is lifted onto the common exponent ``r`` by Young's inequality
``|w|^e <= (r - e)/r + (e/r)|w|^r``; the constants are then maximized over
``k``.  User-supplied rules are recorded as caller-asserted and can be spot
checked with :func:`check_dominating`.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence, Union

import numpy as np

from .errors import ConfigError, DomainError, HypothesisError, RangeError

SMOOTH_CAP = 8


@dataclass(frozen=True)
class PolynomialDominating:
    """P(w) = A + B * sum_i |w_i|^{r_i}."""

    A: float
    B: float
    r: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(float(v) for v in self.r))
        if self.A < 0 or self.B < 0 or any(v < 0 for v in self.r):
            raise DomainError("polynomial dominating data must be non-negative")

    @property
    def kind(self) -> str:
        return "polynomial"

    @property
    def r_single(self) -> float:
        if len(set(self.r)) != 1:
            raise DomainError("exponents differ across coordinates")
        return self.r[0]

    def __call__(self, w) -> np.ndarray:
        w = np.atleast_1d(np.asarray(w, dtype=float))
        return self.A + self.B * sum(np.abs(w[..., i]) ** ri for i, ri in enumerate(self.r))

    def to_dict(self) -> dict[str, Any]:
        return {"kind": "polynomial", "A": self.A, "B": self.B, "r": list(self.r)}


@dataclass(frozen=True)
class ExponentialDominating:
    """P(w) = A * exp(a * sum_i |w_i|^b)."""

    A: float
    a: float
    b: float
    dim: int = 1

    def __post_init__(self):
        if self.A < 0 or self.a < 0:
            raise DomainError("exponential dominating data needs A >= 0 and a >= 0")
        if not 0 < self.b <= 2:
            raise DomainError(f"exponential dominating exponent b must lie in (0, 2], got {self.b}")

    @property
    def kind(self) -> str:
        return "exponential"

    def __call__(self, w) -> np.ndarray:
        w = np.atleast_1d(np.asarray(w, dtype=float))
        return self.A * np.exp(self.a * np.sum(np.abs(w) ** self.b, axis=-1))

    def to_dict(self) -> dict[str, Any]:
        return {"kind": "exponential", "A": self.A, "a": self.a, "b": self.b}


Dominating = Union[PolynomialDominating, ExponentialDominating]


@dataclass(frozen=True)
class GFunction:
    """A statistic g with evenness, smoothness and dominating metadata.

    ``func`` maps an array of shape ``(..., dim)`` to shape ``(...)``.
    """

    name: str
    dim: int
    func: Callable[[np.ndarray], np.ndarray]
    is_even: bool
    smooth_order: int
    rule: Callable[[int], Dominating] = field(repr=False)
    certification: str = "analytic"
    params: dict = field(default_factory=dict)

    def __call__(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=float)
        if self.dim == 1 and (w.ndim == 0 or w.shape[-1] != 1):
            w = w[..., None]
        return self.func(w)

    def eval1d(self, x) -> np.ndarray:
        """Evaluate a univariate g on an array of scalars."""
        if self.dim != 1:
            raise DomainError(f"{self.name} is {self.dim}-dimensional")
        x = np.asarray(x, dtype=float)
        return self.func(x[..., None])

    def dominating(self, order: int) -> Dominating:
        """Dominating function valid for the class of the given order."""
        if order < 1:
            raise RangeError("class order must be >= 1")
        if order > self.smooth_order:
            raise HypothesisError(
                f"g in class of order {order}",
                f"{self.name} is only certified up to order {self.smooth_order}")
        return self.rule(order)

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "dim": self.dim, "is_even": self.is_even,
                "smooth_order": self.smooth_order, "certification": self.certification,
                "params": dict(self.params)}


def young_lift(terms: Sequence[tuple[float, float]], r: float) -> tuple[float, float]:
    """Constants (A, B) with c|w|^e <= A + B|w|^r for every (c, e) in ``terms``."""
    A = B = 0.0
    for c, e in terms:
        if c == 0:
            continue
        if e > r + 1e-12:
            raise DomainError(f"exponent {e} exceeds target {r}")
        if r == 0:
            A = max(A, c)
            continue
        A = max(A, c * (r - e) / r)
        B = max(B, c * e / r)
    return A, B


def _polynomial(A, B, r, d=1):
    return PolynomialDominating(A, B, (r,) * d)


def make_square_sum(d: int = 1) -> GFunction:
    """g(w) = sum_k w_k^2 (chi-square limit)."""
    if d < 1:
        raise RangeError("d must be >= 1")

    def rule(n):
        if n == 1:  # |2 w_i| <= 2 |w_i|
            return _polynomial(0.0, 2.0, 1.0, d)
        return _polynomial(2.0 ** (n / 2), 2.0 ** n, float(n), d)

    return GFunction(f"square_sum({d})", d, lambda w: np.sum(w * w, axis=-1), True,
                     SMOOTH_CAP, rule, params={"d": d})


def make_pair_product(d: int = 1) -> GFunction:
    """g(w) = sum_k w_k w_{d+k} over R^{2d} (variance-gamma limit)."""
    if d < 1:
        raise RangeError("d must be >= 1")

    def rule(n):
        if n == 1:
            return _polynomial(0.0, 1.0, 1.0, 2 * d)
        return _polynomial(1.0, 1.0, float(n), 2 * d)

    return GFunction(f"pair_product({d})", 2 * d,
                     lambda w: np.sum(w[..., :d] * w[..., d:], axis=-1), True,
                     SMOOTH_CAP, rule, params={"d": d})


def make_norm(d: int = 1) -> GFunction:
    """g(w) = |w| (chi limit); only the gradient is bounded."""
    if d < 1:
        raise RangeError("d must be >= 1")

    def rule(n):
        # every partial w_i/|w| is bounded by 1, including near the origin
        return _polynomial(1.0, 0.0, 1.0, d)

    return GFunction(f"norm({d})", d, lambda w: np.sqrt(np.sum(w * w, axis=-1)), True, 1,
                     rule, params={"d": d})


def make_abs() -> GFunction:
    g = make_norm(1)
    return GFunction("abs", 1, lambda w: np.abs(w[..., 0]), True, 1, g.rule)


def make_product(d: int) -> GFunction:
    """g(w) = w_1 w_2 ... w_d (product normal limit)."""
    if d < 1:
        raise RangeError("d must be >= 1")

    def rule(n):
        if d == 1:
            return _polynomial(1.0, 0.0, 1.0, 1)
        r = float(n * (d - 1))
        # a k-th partial over distinct coordinates S is prod_{i not in S} w_i;
        # AM-GM gives |.|^{n/k} <= mean_{i not in S} |w_i|^{e_k}, e_k = n(d-k)/k
        terms = []
        for k in range(1, min(n, d) + 1):
            e = n * (d - k) / k
            terms.append((1.0 if k == d else 1.0 / (d - k), e))
        B = max((c * e / r for c, e in terms), default=0.0)
        A = max(((r - e) / r for c, e in terms), default=0.0)
        return _polynomial(A, B, r, d)

    return GFunction(f"product({d})", d, lambda w: np.prod(w, axis=-1), d % 2 == 0,
                     SMOOTH_CAP, rule, params={"d": d})


def _falling(x: float, k: int) -> float:
    return math.prod(x - j for j in range(k))


def make_abs_power(power: float) -> GFunction:
    """g(w) = |w|^power for power >= 1 (absolute-moment approximation)."""
    if power < 1:
        raise DomainError("abs_power needs power >= 1")
    if float(power).is_integer():
        smooth = SMOOTH_CAP if int(power) % 2 == 0 else int(power)
    else:
        smooth = int(math.floor(power))
    smooth = min(smooth, SMOOTH_CAP)

    def rule(n):
        top = min(n, int(math.floor(power)))
        terms = [(abs(_falling(power, k)) ** (n / k), (power - k) * n / k)
                 for k in range(1, top + 1)]
        r = (power - 1) * n
        return _polynomial(*young_lift(terms, r), r)

    return GFunction(f"abs_power({power:g})", 1, lambda w: np.abs(w[..., 0]) ** power, True,
                     smooth, rule, params={"power": power})


def make_monomial(m: int) -> GFunction:
    """g(w) = w^m."""
    if m < 1 or int(m) != m:
        raise DomainError("monomial degree must be a positive integer")
    m = int(m)

    def rule(n):
        terms = [(float(_falling(m, k)) ** (n / k), (m - k) * n / k)
                 for k in range(1, min(n, m) + 1)]
        r = float((m - 1) * n)
        A, B = young_lift(terms, r)
        return _polynomial(A, B, r if r > 0 else 1.0)

    def func(w):
        x = w[..., 0]
        # |x|^m keeps g(-w) == +-g(w) exact in floating point
        mag = np.abs(x) ** m
        return mag if m % 2 == 0 else np.sign(x) * mag

    return GFunction(f"monomial({m})", 1, func, m % 2 == 0,
                     SMOOTH_CAP, rule, params={"m": m})


def make_polynomial(coeffs: Sequence[float], name: str | None = None) -> GFunction:
    """g(w) = sum_j coeffs[j] w^j."""
    c = [float(v) for v in coeffs]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    deg = len(c) - 1
    if deg < 1:
        raise DomainError("polynomial must be non-constant")
    even = all(v == 0 for v in c[1::2])
    rev = c[::-1]

    def func(w):
        x = w[..., 0]
        acc = np.full_like(x, rev[0])
        for coef in rev[1:]:
            acc = acc * x + coef
        return acc

    def rule(n):
        # |g^(k)(w)| <= S_k max(1, |w|)^(deg-k),  S_k = sum_j |c_j| j!/(j-k)!
        r = float((deg - 1) * n)
        A = B = 0.0
        for k in range(1, min(n, deg) + 1):
            s_k = sum(abs(c[j]) * _falling(j, k) for j in range(k, deg + 1))
            coef = s_k ** (n / k)
            A = max(A, coef)
            if (deg - k) > 0:
                B = max(B, coef)
        return _polynomial(A, B, r if r > 0 else 1.0)

    label = name or "polynomial(" + ",".join(f"{v:g}" for v in c) + ")"
    return GFunction(label, 1, func, even, SMOOTH_CAP, rule, params={"coeffs": c})


def make_scaled_delta(coeffs: Sequence[float], n: int) -> GFunction:
    """g(w) = sqrt(n) f(w / sqrt(n)) for a polynomial f (delta method)."""
    c = [float(v) for v in coeffs]
    if len(c) < 2 or c[1] == 0:
        raise HypothesisError("f'(0) != 0", "the delta method needs a non-zero slope at 0")
    if n < 1:
        raise RangeError("n must be >= 1")
    scaled = [cj * n ** ((1 - j) / 2) for j, cj in enumerate(c)]
    g = make_polynomial(scaled, name=f"scaled_delta(n={n})")
    return GFunction(g.name, 1, g.func, g.is_even, g.smooth_order, g.rule,
                     params={"coeffs": c, "n": n})


def make_exponential(t: float = 1.0) -> GFunction:
    """g(w) = exp(t w), dominated by |t|^n exp(n |t| |w|)."""
    if t == 0:
        raise DomainError("t must be non-zero")

    def rule(n):
        return ExponentialDominating(abs(t) ** n, n * abs(t), 1.0)

    return GFunction(f"exponential({t:g})", 1, lambda w: np.exp(t * w[..., 0]), False,
                     SMOOTH_CAP, rule, params={"t": t})


def make_custom(name: str, dim: int, func: Callable, is_even: bool, smooth_order: int,
                dominating: Dominating) -> GFunction:
    """Wrap a user function with caller-asserted dominating data."""
    return GFunction(name, dim, func, is_even, smooth_order, lambda n: dominating,
                     certification="caller-asserted")


_PRESETS: dict[str, Callable[..., GFunction]] = {
    "square_sum": make_square_sum,
    "pair_product": make_pair_product,
    "norm": make_norm,
    "abs": make_abs,
    "product": make_product,
    "monomial": make_monomial,
    "polynomial": make_polynomial,
    "scaled_delta": make_scaled_delta,
    "abs_power": make_abs_power,
    "exponential": make_exponential,
}


def get_gfunction(spec) -> GFunction:
    """Resolve ``{"name": preset, **params}`` (or a bare name) to a GFunction."""
    if isinstance(spec, GFunction):
        return spec
    if isinstance(spec, str):
        spec = {"name": spec}
    params = dict(spec)
    name = params.pop("name", None)
    if name not in _PRESETS:
        raise ConfigError("g", f"unknown g preset {name!r}")
    try:
        return _PRESETS[name](**params)
    except TypeError as exc:
        raise ConfigError("g", f"bad parameters for {name}: {exc}") from None


# -- finite-difference guards ------------------------------------------------

_FD_STENCILS = {
    0: (np.array([0]), np.array([1.0])),
    1: (np.array([-1, 1]), np.array([-0.5, 0.5])),
    2: (np.array([-1, 0, 1]), np.array([1.0, -2.0, 1.0])),
    3: (np.array([-2, -1, 1, 2]), np.array([-0.5, 1.0, -1.0, 0.5])),
    4: (np.array([-2, -1, 0, 1, 2]), np.array([1.0, -4.0, 6.0, -4.0, 1.0])),
}


def partial_fd(func: Callable, w: np.ndarray, alpha: Sequence[int], step: float) -> np.ndarray:
    """Mixed partial ``d^alpha func`` at points ``w`` (shape (m, d)) by tensor stencils.

    Richardson extrapolation over ``step`` and ``step/2`` cancels the
    leading O(step^2) error.
    """
    w = np.asarray(w, dtype=float)

    def at(h):
        total = np.zeros(w.shape[0])
        grids = [list(zip(*_FD_STENCILS[a])) for a in alpha]
        for combo in itertools.product(*grids):
            shift = np.array([off for off, _ in combo], dtype=float) * h
            weight = math.prod(c for _, c in combo)
            total += weight * func(w + shift)
        return total / h ** sum(alpha)

    coarse, fine = at(step), at(step / 2)
    return (4 * fine - coarse) / 3


def check_evenness(g: GFunction, n_points: int = 1000, seed: int = 0, scale: float = 3.0) -> float:
    """Max |g(w) - g(-w)| over random points."""
    rng = np.random.default_rng(seed)
    w = rng.normal(scale=scale, size=(n_points, g.dim))
    return float(np.max(np.abs(g(w) - g(-w))))


def check_dominating(g: GFunction, order: int, lo: float = -5.0, hi: float = 5.0,
                     points_per_dim: int | None = None, max_k: int = 4,
                     step: float = 1e-3) -> float:
    """Worst ratio |d^k g|^(order/k) / P over a grid, k <= min(order, max_k).

    A value <= 1 (up to FD noise) confirms the recorded dominating data.
    Grid points closer than ``2 * step`` to a coordinate hyperplane are
    nudged off it, so kinks at 0 (|w|, |w|^r) are not straddled.
    """
    dom = g.dominating(order)
    if points_per_dim is None:
        points_per_dim = {1: 201, 2: 41, 3: 15}.get(g.dim, 9)
    axis = np.linspace(lo, hi, points_per_dim)
    axis = np.where(np.abs(axis) < 4 * step, 4 * step, axis)
    w = np.array(list(itertools.product(axis, repeat=g.dim)))
    bound = dom(w)
    worst = 0.0
    for k in range(1, min(order, max_k) + 1):
        for alpha in _multi_indices(g.dim, k):
            deriv = partial_fd(g, w, alpha, step * (1 + np.abs(w).max() / 5))
            lhs = np.abs(deriv) ** (order / k)
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.where(bound > 0, lhs / bound, np.where(lhs > 1e-9, np.inf, 0.0))
            worst = max(worst, float(np.max(ratio)))
    return worst


def _multi_indices(d: int, k: int):
    for combo in itertools.combinations_with_replacement(range(d), k):
        alpha = [0] * d
        for i in combo:
            alpha[i] += 1
        yield tuple(alpha)
