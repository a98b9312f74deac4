"""JSON scenario configuration and the built-in preset scenarios.

A config document is either one scenario object or
``{"schema_version": 1, "scenarios": [...]}``.  Scenario fields::

    id        identifier echoed in every output row
    dist      family name, {"family": ..., **params}, or a list per block
    g         {"name": preset, **params}
    h         {"name": preset, "norms": [...]?, **params}
    d         optional; must equal g's dimension when given
    p         matching-moment order for theorem bounds
    n_grid    list of n (or per-block lists)
    N, seed   Monte Carlo sample count and seed
    bounds    list of bound ids
    solve_grid  optional list of points for the solve command
"""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .distributions import DistributionSpec, get_distribution
from .errors import ConfigError, DomainError
from .gfunctions import GFunction, get_gfunction
from .stein_bounds import BOUND_IDS, evaluate_bound
from .testfunctions import TestFunction, get_testfunction

SCHEMA_VERSION = 1
_FIELDS = {"id", "dist", "g", "h", "d", "p", "n_grid", "N", "seed", "bounds", "solve_grid",
           "description"}


@dataclass
class Scenario:
    id: str
    dists: list[DistributionSpec]
    g_spec: dict[str, Any]
    h: TestFunction
    p: int | None
    n_grid: list
    N: int
    seed: int
    bounds: list[str] = field(default_factory=list)
    solve_grid: list | None = None
    description: str = ""

    @property
    def n_dependent_g(self) -> bool:
        return self.g_spec.get("name") == "scaled_delta" and "n" not in self.g_spec

    def g_for(self, n) -> GFunction:
        """The statistic for sample size n (only scaled_delta depends on n)."""
        spec = dict(self.g_spec)
        if self.n_dependent_g:
            spec["n"] = int(n if not isinstance(n, (list, tuple)) else n[0])
        return get_gfunction(spec)

    @property
    def g(self) -> GFunction:
        return self.g_for(self.n_grid[0])

    def blocks(self, g: GFunction) -> list[DistributionSpec]:
        if len(self.dists) == 1:
            return self.dists * g.dim
        return list(self.dists)

    def validate(self):
        """Resolve presets and check every requested bound's hypotheses at the first n."""
        g = self.g
        if len(self.dists) not in (1, g.dim):
            raise ConfigError("dist", f"give one law or {g.dim} laws, got {len(self.dists)}")
        for bid in self.bounds:
            if bid not in BOUND_IDS:
                raise ConfigError("bounds", f"unknown bound id {bid!r}")
            if bid.startswith("theorem") and self.p is None:
                raise ConfigError("p", f"{bid} needs the matching order p")
            for n in self.n_grid:
                evaluate_bound(bid, dists=self.blocks(self.g_for(n)), n=n, g=self.g_for(n),
                               h_norms=self.h.norms, p=self.p)

    def to_dict(self) -> dict[str, Any]:
        return {"id": self.id, "dist": [x.to_dict() for x in self.dists], "g": self.g_spec,
                "h": self.h.to_dict(), "p": self.p, "n_grid": self.n_grid, "N": self.N,
                "seed": self.seed, "bounds": self.bounds}


def _require(obj: dict, key: str, ctx: str):
    if key not in obj:
        raise ConfigError(f"{ctx}.{key}", "missing required field")
    return obj[key]


def parse_scenario(obj: dict[str, Any], index: int = 0) -> Scenario:
    ctx = f"scenarios[{index}]"
    if not isinstance(obj, dict):
        raise ConfigError(ctx, "scenario must be a JSON object")
    unknown = set(obj) - _FIELDS
    if unknown:
        raise ConfigError(f"{ctx}.{sorted(unknown)[0]}", "unknown field")
    sid = str(_require(obj, "id", ctx))
    raw = _require(obj, "dist", ctx)
    try:
        dists = [get_distribution(x) for x in (raw if isinstance(raw, list) else [raw])]
    except ConfigError as exc:
        raise ConfigError(f"{ctx}.dist", exc.message) from None
    except DomainError as exc:
        raise ConfigError(f"{ctx}.dist", str(exc)) from None
    g_spec = _require(obj, "g", ctx)
    if isinstance(g_spec, str):
        g_spec = {"name": g_spec}
    try:
        h = get_testfunction(_require(obj, "h", ctx))
    except ConfigError as exc:
        raise ConfigError(f"{ctx}.h", exc.message) from None
    n_grid = obj.get("n_grid", [16, 32, 64, 128, 256])
    if not isinstance(n_grid, list) or not n_grid:
        raise ConfigError(f"{ctx}.n_grid", "must be a non-empty list")
    for n in n_grid:
        vals = n if isinstance(n, list) else [n]
        if not all(isinstance(v, int) and v >= 1 for v in vals):
            raise ConfigError(f"{ctx}.n_grid", f"entries must be positive integers, got {n!r}")
    N = obj.get("N", 10_000_000)
    seed = obj.get("seed", 0)
    if not isinstance(N, int) or N < 1000:
        raise ConfigError(f"{ctx}.N", "must be an integer >= 1000")
    if not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"{ctx}.seed", "must be a non-negative integer")
    bounds = obj.get("bounds", [])
    if not isinstance(bounds, list):
        raise ConfigError(f"{ctx}.bounds", "must be a list")
    sc = Scenario(sid, dists, dict(g_spec), h, obj.get("p"), n_grid, N, seed, list(bounds),
                  obj.get("solve_grid"), obj.get("description", ""))
    try:
        g = sc.g
    except ConfigError as exc:
        raise ConfigError(f"{ctx}.g", exc.message) from None
    except DomainError as exc:
        raise ConfigError(f"{ctx}.g", str(exc)) from None
    if "d" in obj and obj["d"] != g.dim:
        raise ConfigError(f"{ctx}.d", f"d = {obj['d']} but {g.name} has dimension {g.dim}")
    sc.validate()
    return sc


def parse_config(doc: dict[str, Any] | list) -> list[Scenario]:
    if isinstance(doc, dict) and "scenarios" in doc:
        version = doc.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ConfigError("schema_version", f"expected {SCHEMA_VERSION}, got {version!r}")
        items = doc["scenarios"]
    elif isinstance(doc, dict):
        version = doc.get("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ConfigError("schema_version", f"expected {SCHEMA_VERSION}, got {version!r}")
        items = [{k: v for k, v in doc.items() if k != "schema_version"}]
    else:
        raise ConfigError("(root)", "config must be a JSON object")
    if not isinstance(items, list) or not items:
        raise ConfigError("scenarios", "must be a non-empty list")
    scenarios = [parse_scenario(obj, i) for i, obj in enumerate(items)]
    ids = [s.id for s in scenarios]
    if len(set(ids)) != len(ids):
        raise ConfigError("scenarios", "scenario ids must be unique")
    return scenarios


def load_config(path: str | Path) -> list[Scenario]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("(root)", f"invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return parse_config(doc)


PRESETS: dict[str, dict[str, Any]] = {
    "chisq_wasserstein": {
        "id": "chisq_wasserstein", "dist": "rademacher", "g": {"name": "square_sum", "d": 1},
        "h": {"name": "sin"}, "p": 2, "n_grid": [25, 100, 400], "N": 10_000_000, "seed": 1,
        "bounds": ["cor41", "theorem32"]},
    "chisq_smooth": {
        "id": "chisq_smooth", "dist": "rademacher", "g": {"name": "square_sum", "d": 1},
        "h": {"name": "sin"}, "p": 2, "n_grid": [25, 100, 400], "N": 10_000_000, "seed": 2,
        "bounds": ["cor42", "theorem34"]},
    "variance_gamma": {
        "id": "variance_gamma", "dist": "rademacher", "g": {"name": "pair_product", "d": 1},
        "h": {"name": "sin"}, "p": 2, "n_grid": [25, 100, 400], "N": 10_000_000, "seed": 3,
        "bounds": ["cor43", "theorem33"]},
    "chi": {
        "id": "chi", "dist": "rademacher", "g": {"name": "norm", "d": 1},
        "h": {"name": "sin"}, "n_grid": [25, 100, 400], "N": 10_000_000, "seed": 4,
        "bounds": ["cor44"]},
    "product_normal": {
        "id": "product_normal", "dist": "standardized_uniform", "g": {"name": "product", "d": 2},
        "h": {"name": "sin"}, "p": 2, "n_grid": [16, 32, 64, 128], "N": 1_000_000, "seed": 5,
        "bounds": ["theorem31", "theorem33"]},
    "delta_method": {
        "id": "delta_method", "dist": "standardized_exponential",
        "g": {"name": "scaled_delta", "coeffs": [0.0, 1.0, 0.5]},
        "h": {"name": "sin"}, "p": 2, "n_grid": [16, 32, 64, 128], "N": 1_000_000, "seed": 6,
        "bounds": ["theorem32"]},
    "abs_moment": {
        "id": "abs_moment", "dist": "rademacher", "g": {"name": "abs_power", "power": 3},
        "h": {"name": "linear_w1"}, "p": 3, "n_grid": [16, 32, 64, 128], "N": 1_000_000,
        "seed": 7, "bounds": ["theorem31", "theorem32"]},
    "rate_odd": {
        "id": "rate_odd", "dist": "standardized_exponential", "g": {"name": "monomial", "m": 3},
        "h": {"name": "sin"}, "n_grid": [16, 32, 64, 128, 256], "N": 10_000_000, "seed": 2024},
    "rate_even": {
        "id": "rate_even", "dist": "standardized_exponential",
        "g": {"name": "square_sum", "d": 1}, "h": {"name": "sin"},
        "n_grid": [16, 32, 64, 128, 256], "N": 10_000_000, "seed": 2024},
    "exact_null": {
        "id": "exact_null", "dist": "standard_normal", "g": {"name": "square_sum", "d": 1},
        "h": {"name": "sin"}, "n_grid": [16, 32, 64, 128, 256], "N": 1_000_000, "seed": 11},
}


def preset_config(*names: str) -> dict[str, Any]:
    """A config document holding the named presets (all when none given)."""
    chosen = names or tuple(PRESETS)
    missing = [x for x in chosen if x not in PRESETS]
    if missing:
        raise ConfigError("preset", f"unknown preset {missing[0]!r}")
    return {"schema_version": SCHEMA_VERSION,
            "scenarios": [copy.deepcopy(PRESETS[x]) for x in chosen]}
