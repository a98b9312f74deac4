"""Closed-form evaluation of the explicit error bounds.

Two families live here:

* pointwise bounds on derivatives of the Stein solution ``f`` and of the
  auxiliary solution ``psi_m``, for polynomial or exponential dominating
  functions (``deriv_bound_*``);
* bounds on ``|E h(g(W)) - E h(g(Z))|`` (``theorem3x_bound`` for general
  inputs and the four ``cor4x_*`` presets), returned as :class:`BoundReport`
  objects with a per-term breakdown.

Evaluators check their hypotheses and raise :class:`HypothesisError`
instead of returning a number that is not a valid bound.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Sequence

import numpy as np
from scipy import integrate

from .combinatorics import DerivNormProfile, h_n
from .distributions import DistributionSpec, get_distribution, std_normal_abs_moment
from .errors import DomainError, HypothesisError
from .gfunctions import GFunction, PolynomialDominating
from .sum_moments import abs_moment_W_upper, exact_moment_W

W_MOMENT_MODES = ("surrogate", "gaussian_limit")


# -- reports -----------------------------------------------------------------

@dataclass(frozen=True)
class BoundTerm:
    name: str
    value: float
    note: str = ""

    def to_dict(self) -> dict[str, Any]:
        out = {"name": self.name, "value": self.value}
        if self.note:
            out["w_moment"] = self.note
        return out


@dataclass
class BoundReport:
    """One evaluated bound: id, echoed inputs, named addends and their sum."""

    bound_id: str
    inputs: dict[str, Any]
    terms: list[BoundTerm]
    total: float = field(init=False)

    def __post_init__(self):
        if any(t.value < 0 or not math.isfinite(t.value) for t in self.terms):
            raise ValueError("bound terms must be finite and non-negative")
        self.total = math.fsum(t.value for t in self.terms)

    def term(self, name: str) -> float:
        return math.fsum(t.value for t in self.terms if t.name == name)

    def to_dict(self) -> dict[str, Any]:
        return {"bound_id": self.bound_id, "inputs": self.inputs,
                "terms": [t.to_dict() for t in self.terms], "total": self.total}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _profile(h_norms) -> DerivNormProfile:
    return h_norms if isinstance(h_norms, DerivNormProfile) else DerivNormProfile(h_norms)


def _need_h(profile: DerivNormProfile, order: int):
    if order < 1:
        return
    if len(profile) < order:
        raise HypothesisError(f"h in C_b^{order}",
                              f"only {len(profile)} derivative norms supplied")


def _hconst(order: int, profile: DerivNormProfile) -> float:
    _need_h(profile, order)
    return h_n(order, profile)


def _need_g(g_order: int | None, order: int):
    if g_order is not None and g_order < order:
        raise HypothesisError(f"g in C_P^{order}", f"g is only certified to order {g_order}")


EZ = std_normal_abs_moment


# -- derivative bounds, polynomial P -------------------------------------------

F_POLY_VARIANTS = ("general", "positive_definite_identity", "univariate_two_fewer")
PSI_POLY_VARIANTS = ("general", "positive_definite_identity", "univariate_third")


def _vec(w, r, d=None):
    w = np.atleast_1d(np.asarray(w, dtype=float))
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if r.size == 1 and w.size > 1:
        r = np.full(w.size, r[0])
    if w.size != r.size:
        raise DomainError(f"point has {w.size} coordinates but {r.size} exponents were given")
    return w, r


def deriv_bound_f_poly(variant: str, n_order: int, h_norms, A: float, B: float, r, w,
                       variances: Sequence[float] | None = None,
                       g_order: int | None = None) -> float:
    """Pointwise bound on an order-``n_order`` partial derivative of f.

    ``general``: g, h of order n; constant ``h_n / n``.
    ``positive_definite_identity``: covariance I, g, h of order n - 1.
    ``univariate_two_fewer``: d = 1, g, h of order n - 2.
    ``variances`` (general variant only) are the diagonal entries of the
    covariance, so ``Z_i ~ N(0, variances[i])``.
    """
    prof = _profile(h_norms)
    w, r = _vec(w, r)
    if variant == "general":
        if n_order < 1:
            raise HypothesisError("n >= 1", f"got n = {n_order}")
        _need_g(g_order, n_order)
        var = np.ones(w.size) if variances is None else np.asarray(variances, dtype=float)
        s = math.fsum(2 ** ri * (abs(wi) ** ri + vi ** (ri / 2) * EZ(ri))
                      for wi, ri, vi in zip(w, r, var))
        return _hconst(n_order, prof) / n_order * (A + B * s)
    if variant == "positive_definite_identity":
        if n_order < 2:
            raise HypothesisError("n >= 2", f"got n = {n_order}")
        _need_g(g_order, n_order - 1)
        s = math.fsum(2 ** ri * (abs(wi) ** ri + EZ(ri + 1)) for wi, ri in zip(w, r))
        return _hconst(n_order - 1, prof) * (A + B * s)
    if variant == "univariate_two_fewer":
        if n_order < 3:
            raise HypothesisError("n >= 3", f"got n = {n_order}")
        if w.size != 1:
            raise HypothesisError("d = 1", f"got d = {w.size}")
        _need_g(g_order, n_order - 2)
        x, rr = abs(float(w[0])), float(r[0])
        inner = x ** (rr + 1) + 2 * x ** rr + x * EZ(rr + 1) + EZ(rr)
        return _hconst(n_order - 2, prof) * (3 * A + 2 ** rr * B * inner)
    raise DomainError(f"unknown variant {variant!r}; choose from {F_POLY_VARIANTS}")


def deriv_bound_psi_poly(m: int, n_order: int, h_norms, A: float, B: float, r, w,
                         variant: str = "general", g_order: int | None = None) -> float:
    """Pointwise bound on an order-``n_order`` partial derivative of psi_m.

    ``univariate_third`` bounds the third derivative (``n_order`` must be 3)
    with g, h of order m - 1.
    """
    prof = _profile(h_norms)
    w, r = _vec(w, r)
    if m < 1 or n_order < 1:
        raise HypothesisError("m, n >= 1", f"got m = {m}, n = {n_order}")
    if variant == "general":
        _need_g(g_order, m + n_order)
        s = math.fsum(3 ** ri * (abs(wi) ** ri + 2 * EZ(ri)) for wi, ri in zip(w, r))
        return _hconst(m + n_order, prof) / (n_order * (m + n_order)) * (A + B * s)
    if variant == "positive_definite_identity":
        if m + n_order < 3:
            raise HypothesisError("m + n >= 3", f"got m + n = {m + n_order}")
        _need_g(g_order, m + n_order - 2)
        s = math.fsum(3 ** ri * (abs(wi) ** ri + 2 * EZ(ri + 1)) for wi, ri in zip(w, r))
        return _hconst(m + n_order - 2, prof) * (A + B * s)
    if variant == "univariate_third":
        if n_order != 3:
            raise DomainError("univariate_third bounds the third derivative only")
        if m < 2:
            raise HypothesisError("m >= 2", f"got m = {m}")
        if w.size != 1:
            raise HypothesisError("d = 1", f"got d = {w.size}")
        _need_g(g_order, m - 1)
        x, rr = abs(float(w[0])), float(r[0])
        inner = (x ** (rr + 2) + 2 * x ** (rr + 1) + 2 * x ** rr
                 + 2 * EZ(rr + 1) * (1 + x + x * x) + EZ(rr))
        return _hconst(m - 1, prof) * (A * (6 + x * x) + 2 * 3 ** rr * B * inner)
    raise DomainError(f"unknown variant {variant!r}; choose from {PSI_POLY_VARIANTS}")


# -- derivative bounds, exponential P ------------------------------------------

def c_kr(k: int, r: float) -> float:
    """max(1, k^(r-1)), the constant in |w_1 + ... + w_k|^r <= c sum |w_j|^r."""
    return max(1.0, float(k) ** (r - 1))


@lru_cache(maxsize=256)
def gaussian_exp_moment(alpha: float, b: float, weight_power: int = 0) -> float:
    """E[|Z|^weight_power exp(alpha |Z|^b)] by adaptive quadrature."""
    if b > 2 or (b == 2 and alpha >= 0.5):
        raise DomainError(
            "E exp(alpha |Z|^b) diverges: need b < 2, or b = 2 with alpha < 1/2 "
            f"(the dominating function must have a finite Gaussian mean); got alpha={alpha:g}, b={b:g}")
    norm = math.sqrt(2 / math.pi)
    f = lambda z: z ** weight_power * math.exp(alpha * z ** b - 0.5 * z * z)
    val, err = integrate.quad(f, 0, math.inf, epsabs=0, epsrel=1e-11, limit=400)
    return norm * val


def _check_exp(a: float, b: float, c: float):
    if a < 0:
        raise DomainError("a must be non-negative")
    if not 0 < b <= 2:
        raise DomainError(f"b must lie in (0, 2], got {b}")
    if b == 2 and a * c >= 0.5:
        raise DomainError(
            f"b = 2 with effective coefficient a*c = {a * c:g} >= 1/2 makes the Gaussian "
            "expectation infinite (the dominating function must have a finite Gaussian mean)")


def deriv_bound_f_exp(n_order: int, h_norms, A: float, a: float, b: float, w,
                      variant: str = "general") -> float:
    """Pointwise bound on derivatives of f when P(w) = A exp(a sum |w_i|^b)."""
    prof = _profile(h_norms)
    w = np.atleast_1d(np.asarray(w, dtype=float))
    d = w.size
    c2 = c_kr(2, b)
    _check_exp(a, b, c2)
    if A == 0:
        return 0.0
    growth = math.exp(a * c2 * float(np.sum(np.abs(w) ** b)))
    e0 = gaussian_exp_moment(a * c2, b)
    e1 = gaussian_exp_moment(a * c2, b, 1)
    if variant == "general":
        return A * _hconst(n_order, prof) / n_order * growth * e0 ** d
    if variant == "positive_definite_identity":
        if n_order < 2:
            raise HypothesisError("n >= 2", f"got n = {n_order}")
        return A * _hconst(n_order - 1, prof) * growth * e1 * e0 ** (d - 1)
    if variant == "univariate_two_fewer":
        if n_order < 3:
            raise HypothesisError("n >= 3", f"got n = {n_order}")
        if d != 1:
            raise HypothesisError("d = 1", f"got d = {d}")
        return A * _hconst(n_order - 2, prof) * growth * (1 + e0 + abs(w[0]) * e1)
    raise DomainError(f"unknown variant {variant!r}; choose from {F_POLY_VARIANTS}")


def deriv_bound_psi_exp(m: int, n_order: int, h_norms, A: float, a: float, b: float, w,
                        variant: str = "general") -> float:
    """Pointwise bound on derivatives of psi_m when P(w) = A exp(a sum |w_i|^b)."""
    prof = _profile(h_norms)
    w = np.atleast_1d(np.asarray(w, dtype=float))
    d = w.size
    c2, c3 = c_kr(2, b), c_kr(3, b)
    _check_exp(a, b, c3)
    if A == 0:
        return 0.0
    growth = math.exp(a * c3 * float(np.sum(np.abs(w) ** b)))
    e0 = gaussian_exp_moment(a * c3, b)
    e1 = gaussian_exp_moment(a * c3, b, 1)
    if variant == "general":
        return A * _hconst(m + n_order, prof) / (n_order * (m + n_order)) * growth * (e0 ** d) ** 2
    if variant == "positive_definite_identity":
        if m + n_order < 3:
            raise HypothesisError("m + n >= 3", f"got m + n = {m + n_order}")
        return A * _hconst(m + n_order - 2, prof) * growth * (e1 * e0 ** (d - 1)) ** 2
    if variant == "univariate_third":
        if n_order != 3:
            raise DomainError("univariate_third bounds the third derivative only")
        if m < 2:
            raise HypothesisError("m >= 2", f"got m = {m}")
        if d != 1:
            raise HypothesisError("d = 1", f"got d = {d}")
        x = abs(float(w[0]))
        f0 = gaussian_exp_moment(a * c2, b)
        f1 = gaussian_exp_moment(a * c2, b, 1)
        return A * _hconst(m - 1, prof) * growth * (1 + f0 + 2 * x * f1 + 2 * (1 + x * x) * e1 ** 2)
    raise DomainError(f"unknown variant {variant!r}; choose from {PSI_POLY_VARIANTS}")


# -- theorem inputs ------------------------------------------------------------

@dataclass
class BoundInputs:
    """Everything a theorem evaluator needs.

    ``dists[j]`` and ``n[j]`` describe coordinate block j (all summands in a
    block share one law).  ``A``, ``B``, ``r`` default to the dominating data
    ``g`` records for the class order the theorem requires.
    """

    dists: list[DistributionSpec]
    n: list[int]
    p: int
    g: GFunction
    h_norms: DerivNormProfile
    A: float | None = None
    B: float | None = None
    r: tuple[float, ...] | None = None
    w_moment: str = "surrogate"

    def __post_init__(self):
        d = self.g.dim
        if isinstance(self.dists, (str, dict, DistributionSpec)):
            self.dists = [self.dists] * d
        self.dists = [get_distribution(x) for x in self.dists]
        if isinstance(self.n, (int, np.integer)):
            self.n = [int(self.n)] * d
        self.n = [int(v) for v in self.n]
        if len(self.dists) != d or len(self.n) != d:
            raise DomainError(f"need one law and one n per coordinate (d = {d})")
        if any(v < 1 for v in self.n):
            raise DomainError("block sizes must be positive")
        self.h_norms = _profile(self.h_norms)
        if self.p < 2:
            raise HypothesisError("p >= 2", f"got p = {self.p}")
        for j, dist in enumerate(self.dists):
            if dist.matching_order() < self.p:
                bad = next(k for k in range(3, self.p + 1)
                           if abs(dist.moment(k) - (0.0 if k % 2 else math.prod(range(k - 1, 0, -2)))) >= 1e-12)
                raise HypothesisError(
                    f"E X^k = E Z^k for k <= {self.p}",
                    f"block {j} ({dist.name}) has E X^{bad} = {dist.moment(bad):g}")
        if self.w_moment not in W_MOMENT_MODES:
            raise DomainError(f"w_moment must be one of {W_MOMENT_MODES}")

    @property
    def d(self) -> int:
        return self.g.dim

    def dominating(self, order: int) -> PolynomialDominating:
        if self.A is not None or self.B is not None or self.r is not None:
            if None in (self.A, self.B, self.r):
                raise DomainError("override all of A, B, r or none")
            _need_g(self.g.smooth_order, order)
            return PolynomialDominating(self.A, self.B, tuple(self.r))
        dom = self.g.dominating(order)
        if not isinstance(dom, PolynomialDominating):
            raise HypothesisError("polynomial dominating function",
                                  f"{self.g.name} has {dom.kind} growth")
        return dom

    def w_abs(self, j: int, r: float) -> tuple[float, str]:
        """E|W_j|^r per the configured mode, with a note naming the method."""
        if self.w_moment == "gaussian_limit":
            return EZ(r), "gaussian_limit"
        val = abs_moment_W_upper(self.dists[j], self.n[j], r)
        s = 2 * math.ceil(r / 2)
        note = "exact" if s == r or r == 0 else f"lyapunov(s={s})"
        return val, note

    def echo(self, order: int) -> dict[str, Any]:
        dom = self.dominating(order)
        return {"dists": [x.name for x in self.dists], "n": list(self.n), "p": self.p,
                "g": self.g.name, "h_norms": self.h_norms.to_list(), "A": dom.A, "B": dom.B,
                "r": list(dom.r), "w_moment": self.w_moment}


def _inputs(inputs=None, **kw) -> BoundInputs:
    if inputs is not None:
        return inputs
    return BoundInputs(**kw)


def _abs(dist: DistributionSpec, q: float) -> float:
    return dist.abs_moment(q)


# -- main theorems ---------------------------------------------------------------

def theorem31_bound(inputs: BoundInputs | None = None, **kw) -> BoundReport:
    """General g of class order p, any d."""
    bi = _inputs(inputs, **kw)
    p = bi.p
    dom = bi.dominating(p)
    hp = _hconst(p, bi.h_norms)
    pre = (p + 1) / math.factorial(p) * hp
    terms = []
    for j, (dist, nj) in enumerate(zip(bi.dists, bi.n)):
        scale = pre * nj * nj ** (-(p + 1) / 2)
        xq = _abs(dist, p + 1)
        terms.append(BoundTerm(f"block{j}:A", scale * dom.A * xq))
        for k, rk in enumerate(dom.r):
            wv, note = bi.w_abs(j, rk)
            c = scale * dom.B * 2 ** rk
            terms.append(BoundTerm(f"block{j}:B:r{k}:W", c * 2 ** rk * xq * wv, note))
            terms.append(BoundTerm(f"block{j}:B:r{k}:X",
                                   c * 2 ** rk * nj ** (-rk / 2) * _abs(dist, rk + p + 1)))
            terms.append(BoundTerm(f"block{j}:B:r{k}:Z", c * EZ(rk + 1) * xq))
    return BoundReport("theorem31", bi.echo(p), terms)


def _need_univariate(bi: BoundInputs):
    if bi.d != 1:
        raise HypothesisError("d = 1", f"g has dimension {bi.d}")


def _need_even(bi: BoundInputs):
    if not bi.g.is_even:
        raise HypothesisError("g even", f"{bi.g.name} is not an even function")
    if bi.p % 2:
        raise HypothesisError("p even", f"got p = {bi.p}")


def theorem32_bound(inputs: BoundInputs | None = None, **kw) -> BoundReport:
    """d = 1, g of class order p - 1."""
    bi = _inputs(inputs, **kw)
    _need_univariate(bi)
    p, n, dist = bi.p, bi.n[0], bi.dists[0]
    dom = bi.dominating(p - 1)
    r = dom.r_single
    pre = (p + 1) / (math.factorial(p) * n ** ((p + 1) / 2)) * _hconst(p - 1, bi.h_norms) * n
    x1 = _abs(dist, p + 1)
    w1, n1 = bi.w_abs(0, r + 1)
    w0, n0 = bi.w_abs(0, r)
    c = pre * 2 ** r * dom.B
    terms = [
        BoundTerm("A", pre * 3 * dom.A * x1),
        BoundTerm("B:W", c * 2 ** (r + 1) * x1 * (w1 + w0), f"{n1}+{n0}"),
        BoundTerm("B:Z", c * 4 * EZ(r + 1) * _abs(dist, p + 2)),
        BoundTerm("B:X", c * 2 ** (r + 2) * n ** (-r / 2) * _abs(dist, r + p + 2)),
    ]
    return BoundReport("theorem32", bi.echo(p - 1), terms)


def theorem33_bound(inputs: BoundInputs | None = None, **kw) -> BoundReport:
    """Even g of class order p + 2, even p, any d.

    The second double sum runs over an outer summand (j, i) and an inner
    summand (k, l); its bracket is evaluated with the inner block's law,
    size and E|W_k|, while the dominating exponents range over all d
    coordinates independently of either block index.
    """
    bi = _inputs(inputs, **kw)
    _need_even(bi)
    p = bi.p
    dom = bi.dominating(p + 2)
    pre = _hconst(p + 2, bi.h_norms) / math.factorial(p)
    terms = []
    for j, (dist, nj) in enumerate(zip(bi.dists, bi.n)):
        skew = abs(dist.moment(p + 1))
        scale = pre / (p + 2) * nj * nj ** (-(p / 2 + 1)) * ((p + 2) / (p + 1) + skew)
        xq = _abs(dist, p + 2)
        terms.append(BoundTerm(f"first:block{j}:A", scale * dom.A * xq))
        for k, rk in enumerate(dom.r):
            wv, note = bi.w_abs(j, rk)
            c = scale * dom.B * 2 ** rk
            terms.append(BoundTerm(f"first:block{j}:B:r{k}:W", c * 2 ** rk * xq * wv, note))
            terms.append(BoundTerm(f"first:block{j}:B:r{k}:X",
                                   c * 2 ** rk * nj ** (-rk / 2) * _abs(dist, rk + p + 2)))
            terms.append(BoundTerm(f"first:block{j}:B:r{k}:Z", c * EZ(rk) * xq))
    for j, (dist, nj) in enumerate(zip(bi.dists, bi.n)):
        outer = 1.5 * pre * nj * abs(dist.moment(p + 1)) * nj ** (-(p + 1) / 2)
        for kb, (dist_k, nk) in enumerate(zip(bi.dists, bi.n)):
            scale = outer * nk * nk ** (-1.5)
            x3 = _abs(dist_k, 3)
            terms.append(BoundTerm(f"second:block{j}x{kb}:A", scale * dom.A * x3))
            for k, rk in enumerate(dom.r):
                wv, note = bi.w_abs(kb, rk)
                c = scale * dom.B * 3 ** rk
                terms.append(BoundTerm(f"second:block{j}x{kb}:B:r{k}:W",
                                       c * 2 ** rk * x3 * wv, note))
                terms.append(BoundTerm(f"second:block{j}x{kb}:B:r{k}:X",
                                       c * 2 ** rk * nk ** (-rk / 2) * _abs(dist_k, rk + 3)))
                terms.append(BoundTerm(f"second:block{j}x{kb}:B:r{k}:Z",
                                       c * 2 * EZ(rk + 1) * x3))
    return BoundReport("theorem33", bi.echo(p + 2), terms)


def theorem34_bound(inputs: BoundInputs | None = None, **kw) -> BoundReport:
    """d = 1, even g of class order p, even p."""
    bi = _inputs(inputs, **kw)
    _need_univariate(bi)
    _need_even(bi)
    p, n, dist = bi.p, bi.n[0], bi.dists[0]
    dom = bi.dominating(p)
    r = dom.r_single
    pre = _hconst(p, bi.h_norms) / (math.factorial(p) * n ** (p / 2 + 1))
    skew = abs(dist.moment(p + 1))
    x2 = _abs(dist, p + 2)
    w1, n1 = bi.w_abs(0, r + 1)
    w0, n0 = bi.w_abs(0, r)
    w2, n2 = bi.w_abs(0, r + 2)
    first = pre / (p + 2) * n * ((p + 2) / (p + 1) + skew)
    c1 = first * 2 ** r * dom.B
    second = pre * 1.5 / n * n * n * skew
    c2 = second * 3 ** (r + 1) * dom.B
    terms = [
        BoundTerm("first:A", first * 3 * dom.A * x2),
        BoundTerm("first:B:W", c1 * 2 ** (r + 1) * x2 * (w1 + w0), f"{n1}+{n0}"),
        BoundTerm("first:B:Z", c1 * 4 * EZ(r + 1) * _abs(dist, p + 3)),
        BoundTerm("first:B:X", c1 * 2 ** (r + 2) * n ** (-r / 2) * _abs(dist, r + p + 3)),
        BoundTerm("second:A", second * 10 * dom.A * x2),
        BoundTerm("second:B:W", c2 * 2 ** (r + 1) * x2 * (2 * w2 + w0), f"{n2}+{n0}"),
        BoundTerm("second:B:Z", c2 * 16 * EZ(r + 1) * _abs(dist, p + 4)),
        BoundTerm("second:B:X", c2 * 2 ** (r + 3) * n ** (-r / 2) * _abs(dist, r + p + 4)),
    ]
    return BoundReport("theorem34", bi.echo(p), terms)


# -- corollaries -------------------------------------------------------------------

def _norm1(h1) -> DerivNormProfile:
    if isinstance(h1, (int, float)):
        return DerivNormProfile([float(h1)])
    return _profile(h1)


def cor41_chisq_wasserstein(d: int, n: int, dist, h1_norm=1.0) -> BoundReport:
    """Chi-square limit of sum_k W_k^2, first-derivative norm only."""
    dist = get_distribution(dist)
    prof = _norm1(h1_norm)
    _need_h(prof, 1)
    c = 48 * d * prof.norm(1) / math.sqrt(n)
    terms = [
        BoundTerm("E|X|^3", c * _abs(dist, 3)),
        BoundTerm("sqrt(2/pi) E X^4", c * math.sqrt(2 / math.pi) * dist.moment(4)),
        BoundTerm("E|X|^5 / sqrt(n)", c * _abs(dist, 5) / math.sqrt(n)),
    ]
    return BoundReport("cor41", {"d": d, "n": n, "dist": dist.name,
                                 "h_norms": prof.to_list()[:1]}, terms)


def cor42_chisq_smooth(d: int, n: int, dist, h_norms) -> BoundReport:
    """Chi-square limit with an n^-1 rate for twice-differentiable h."""
    dist = get_distribution(dist)
    prof = _profile(h_norms)
    _need_h(prof, 2)
    c = d / n * (prof.norm(2) + prof.norm(1))
    w3 = abs_moment_W_upper(dist, n, 3)
    w4 = exact_moment_W(dist, n, 4)
    skew = abs(dist.moment(3))
    terms = [
        BoundTerm("22 E|W|^3", c * 22 * w3, "lyapunov(s=4)"),
        BoundTerm("40 E|X|^5", c * 40 * _abs(dist, 5)),
        BoundTerm("43/n E|X|^7", c * 43 / n * _abs(dist, 7)),
        BoundTerm("skew:1312 EX^4 EW^4", c * skew * 1312 * dist.moment(4) * w4, "exact"),
        BoundTerm("skew:3974 EX^6", c * skew * 3974 * dist.moment(6)),
        BoundTerm("skew:2592/n EX^8", c * skew * 2592 / n * dist.moment(8)),
    ]
    return BoundReport("cor42", {"d": d, "n": n, "dist": dist.name,
                                 "h_norms": prof.to_list()[:2]}, terms)


def cor43_vg(d: int, m: int, n: int, distX, distY, h_norms) -> BoundReport:
    """Variance-gamma limit of sum_k W_k W_{d+k} with block sizes m and n."""
    dx, dy = get_distribution(distX), get_distribution(distY)
    prof = _profile(h_norms)
    c = d * _hconst(4, prof)
    x4w4 = dx.moment(4) * exact_moment_W(dx, m, 4)
    y4w4 = dy.moment(4) * exact_moment_W(dy, n, 4)
    skew = abs(dx.moment(3)) / math.sqrt(m) + abs(dy.moment(3)) / math.sqrt(n)
    terms = [
        BoundTerm("43/m EX^4 EW^4", c * 43 / m * x4w4, "exact"),
        BoundTerm("43/m^3 EX^8", c * 43 / m ** 3 * dx.moment(8)),
        BoundTerm("43/n EY^4 EW^4", c * 43 / n * y4w4, "exact"),
        BoundTerm("43/n^3 EY^8", c * 43 / n ** 3 * dy.moment(8)),
        BoundTerm("skew:1781/sqrt(m) EX^4 EW^4", c * skew * 1781 / math.sqrt(m) * x4w4, "exact"),
        BoundTerm("skew:1781/sqrt(n) EY^4 EW^4", c * skew * 1781 / math.sqrt(n) * y4w4, "exact"),
        BoundTerm("skew:1004/m^2.5 EX^8", c * skew * 1004 / m ** 2.5 * dx.moment(8)),
        BoundTerm("skew:1004/n^2.5 EY^8", c * skew * 1004 / n ** 2.5 * dy.moment(8)),
    ]
    return BoundReport("cor43", {"d": d, "m": m, "n": n, "distX": dx.name, "distY": dy.name,
                                 "h_norms": prof.to_list()[:4]}, terms)


def cor44_chi(d: int, n: int, dist, h1_norm=1.0) -> BoundReport:
    """Chi limit of |W| = (sum_k W_k^2)^(1/2)."""
    dist = get_distribution(dist)
    prof = _norm1(h1_norm)
    _need_h(prof, 1)
    c = d * prof.norm(1) / math.sqrt(n)
    terms = [BoundTerm("2", 2 * c), BoundTerm("E|X|^3", c * _abs(dist, 3))]
    return BoundReport("cor44", {"d": d, "n": n, "dist": dist.name,
                                 "h_norms": prof.to_list()[:1]}, terms)


THEOREMS = {
    "theorem31": theorem31_bound,
    "theorem32": theorem32_bound,
    "theorem33": theorem33_bound,
    "theorem34": theorem34_bound,
}
COROLLARIES = {
    "cor41": cor41_chisq_wasserstein,
    "cor42": cor42_chisq_smooth,
    "cor43": cor43_vg,
    "cor44": cor44_chi,
}
BOUND_IDS = tuple(THEOREMS) + tuple(COROLLARIES)


def evaluate_bound(bound_id: str, *, dists, n, g: GFunction, h_norms, p: int | None = None,
                   w_moment: str = "surrogate") -> BoundReport:
    """Evaluate a registered bound for a scenario-shaped set of inputs.

    ``dists`` and ``n`` are per coordinate block.  Corollaries read the
    dimension from ``g``: cor41, cor42 and cor44 take d = g.dim, cor43 takes
    d = g.dim / 2 with the first half of the blocks as X and the second as Y.
    """
    if bound_id in THEOREMS:
        if p is None:
            raise DomainError(f"{bound_id} needs the matching order p")
        return THEOREMS[bound_id](BoundInputs(dists, n, p, g, h_norms, w_moment=w_moment))
    if bound_id not in COROLLARIES:
        raise DomainError(f"unknown bound id {bound_id!r}; choose from {BOUND_IDS}")
    dl = [get_distribution(x) for x in (dists if isinstance(dists, list) else [dists] * g.dim)]
    nl = list(n) if isinstance(n, (list, tuple)) else [int(n)] * g.dim
    if bound_id == "cor43":
        d = g.dim // 2
        return cor43_vg(d, nl[0], nl[d], dl[0], dl[d], h_norms)
    if len(set(nl)) != 1 or len({x.name for x in dl}) != 1:
        raise HypothesisError("i.i.d. blocks", f"{bound_id} needs one law and one n for all blocks")
    return COROLLARIES[bound_id](g.dim, nl[0], dl[0], h_norms)
