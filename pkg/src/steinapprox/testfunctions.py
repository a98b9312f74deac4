"""Test functions h with their derivative sup-norms ||h^(k)||."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import hermite_e as He

from .combinatorics import DerivNormProfile
from .errors import ConfigError

DEFAULT_ORDER = 8


@dataclass(frozen=True)
class TestFunction:
    """A test function with an array of derivative sup-norms.

    ``derivative(k, x)`` is analytic when the preset provides it.
    """

    __test__ = False  # not a pytest class

    name: str
    func: Callable[[np.ndarray], np.ndarray]
    norms: DerivNormProfile
    deriv: Callable[[int, np.ndarray], np.ndarray] | None = field(default=None, repr=False)
    bounded: bool = True
    params: dict = field(default_factory=dict)

    def __call__(self, x) -> np.ndarray:
        return self.func(np.asarray(x, dtype=float))

    def derivative(self, k: int, x) -> np.ndarray:
        if self.deriv is None:
            raise NotImplementedError(f"{self.name} has no analytic derivatives")
        return self.deriv(k, np.asarray(x, dtype=float))

    @property
    def is_constant(self) -> bool:
        return all(v == 0 for v in self.norms.norms)

    def with_norms(self, norms: Sequence[float]) -> "TestFunction":
        return TestFunction(self.name, self.func, DerivNormProfile(norms), self.deriv,
                            self.bounded, self.params)

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "norms": self.norms.to_list(), "params": dict(self.params)}


def make_sin(order: int = DEFAULT_ORDER) -> TestFunction:
    def deriv(k, x):
        return np.sin(x + k * math.pi / 2)

    return TestFunction("sin", np.sin, DerivNormProfile([1.0] * order), deriv)


def bump_norms(order: int = DEFAULT_ORDER) -> list[float]:
    """Sup-norms of derivatives of exp(-x^2/2).

    ``d^k/dx^k exp(-x^2/2) = (-1)^k He_k(x) exp(-x^2/2)``, whose extrema sit
    at the roots of ``He_{k+1}``.
    """
    out = []
    for k in range(1, order + 1):
        roots = He.hermeroots([0] * (k + 1) + [1])
        vals = np.abs(He.hermeval(roots, [0] * k + [1])) * np.exp(-roots ** 2 / 2)
        out.append(float(vals.max()))
    return out


def make_bump(order: int = DEFAULT_ORDER) -> TestFunction:
    """The Gaussian bump exp(-x^2/2)."""
    def deriv(k, x):
        return (-1) ** k * He.hermeval(x, [0] * k + [1]) * np.exp(-x ** 2 / 2)

    return TestFunction("bump", lambda x: np.exp(-x ** 2 / 2), DerivNormProfile(bump_norms(order)),
                        deriv)


def _logistic_polys(order: int) -> list[Polynomial]:
    # sigma' = sigma (1 - sigma), so d/dx P(sigma) = P'(sigma) sigma (1 - sigma)
    polys = [Polynomial([0, 1])]
    factor = Polynomial([0, 1, -1])
    for _ in range(order):
        polys.append(polys[-1].deriv() * factor)
    return polys


def logistic_norms(order: int = DEFAULT_ORDER, scale: float = 1.0) -> list[float]:
    polys = _logistic_polys(order)
    out = []
    for k in range(1, order + 1):
        p = polys[k]
        crit = [r.real for r in p.deriv().roots() if abs(r.imag) < 1e-12 and 0 <= r.real <= 1]
        pts = np.array(crit + [0.0, 1.0])
        out.append(float(np.max(np.abs(p(pts)))) * abs(scale) ** k)
    return out


def make_logistic_scaled(scale: float = 1.0, order: int = DEFAULT_ORDER) -> TestFunction:
    """h(x) = 1 / (1 + exp(-scale x))."""
    polys = _logistic_polys(order)

    def sigma(x):
        return 0.5 * (1 + np.tanh(0.5 * scale * x))

    def deriv(k, x):
        return polys[k](sigma(x)) * scale ** k

    return TestFunction("logistic_scaled", sigma, DerivNormProfile(logistic_norms(order, scale)),
                        deriv, params={"scale": scale})


def make_linear(order: int = DEFAULT_ORDER) -> TestFunction:
    """h(x) = x.  Unbounded, so only usable where moments suffice."""
    def deriv(k, x):
        return np.ones_like(x) if k == 1 else np.zeros_like(x)

    return TestFunction("linear_w1", lambda x: np.array(x, dtype=float, copy=True),
                        DerivNormProfile([1.0] + [0.0] * (order - 1)), deriv, bounded=False)


def make_constant(value: float = 1.0, order: int = DEFAULT_ORDER) -> TestFunction:
    def deriv(k, x):
        return np.zeros_like(x)

    return TestFunction("constant", lambda x: np.full(np.shape(x), float(value)),
                        DerivNormProfile([0.0] * order), deriv, params={"value": value})


_PRESETS = {
    "sin": make_sin,
    "bump": make_bump,
    "logistic_scaled": make_logistic_scaled,
    "linear_w1": make_linear,
    "linear": make_linear,
    "constant": make_constant,
}


def get_testfunction(spec) -> TestFunction:
    """Resolve ``{"name": preset, "norms": [...]?, **params}`` or a bare name."""
    if isinstance(spec, TestFunction):
        return spec
    if isinstance(spec, str):
        spec = {"name": spec}
    params = dict(spec)
    name = params.pop("name", None)
    norms = params.pop("norms", None)
    if name not in _PRESETS:
        raise ConfigError("h", f"unknown test function {name!r}")
    try:
        h = _PRESETS[name](**params)
    except TypeError as exc:
        raise ConfigError("h", f"bad parameters for {name}: {exc}") from None
    if norms is not None:
        try:
            h = h.with_norms(norms)
        except ValueError as exc:
            raise ConfigError("h.norms", str(exc)) from None
    return h
