"""Command-line entry point: ``steinapprox {bound,rate,distance,solve,selftest}``.

Exit codes: 0 ok, 1 runtime error, 2 hypothesis or validation failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from . import __version__
from .errors import (AccuracyError, ConfigError, DimensionError, DomainError, HypothesisError,
                     InsufficientSignalError, RangeError)
from .montecarlo import RatePoint, _check_grid, distance, fit_points, SIGNIFICANCE
from .scenarios import PRESETS, Scenario, load_config, parse_config, preset_config
from .stein_bounds import evaluate_bound

RATE_COLUMNS = ["scenario", "n", "N", "delta_mean", "delta_stderr", "significant", "slope",
                "slope_stderr", "intercept", "seed"]
DISTANCE_COLUMNS = ["scenario", "n", "N", "delta_mean", "delta_stderr", "bound_total", "margin",
                    "seed", "bound_id"]
BOUND_COLUMNS = ["scenario", "bound_id", "n", "total", "seed"]
SOLVE_COLUMNS_1D = ["scenario", "w", "f", "residual", "seed"]

VALIDATION_ERRORS = (ConfigError, HypothesisError, DomainError, RangeError, DimensionError)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ";".join(_fmt(v) for v in value)
    return "" if value is None else str(value)


def _timestamp() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def render_csv(columns: list[str], rows: Iterable[dict], timestamp: bool) -> str:
    buf = io.StringIO()
    if timestamp:
        buf.write(f"# steinapprox {__version__} generated {_timestamp()}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def _emit(args, filename: str, text: str):
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / filename).write_text(text)
        print(f"wrote {out / filename}", file=sys.stderr)
    else:
        sys.stdout.write(text)


def _scenarios(args) -> list[Scenario]:
    if args.config and args.preset:
        raise ConfigError("--preset", "give either --config or --preset, not both")
    if args.config:
        scenarios = load_config(args.config)
    elif args.preset:
        scenarios = parse_config(preset_config(*args.preset))
    else:
        raise ConfigError("--config", "a config file (or --preset NAME) is required")
    if args.only:
        scenarios = [s for s in scenarios if s.id in args.only]
        if not scenarios:
            raise ConfigError("--scenario", f"no scenario with id in {args.only}")
    for sc in scenarios:
        if args.seed is not None:
            sc.seed = args.seed
        if args.samples is not None:
            if args.samples < 1000:
                raise ConfigError("--samples", "must be at least 1000")
            sc.N = args.samples
    return scenarios


def _reports(sc: Scenario):
    for n in sc.n_grid:
        g = sc.g_for(n)
        for bid in sc.bounds:
            yield n, evaluate_bound(bid, dists=sc.blocks(g), n=n, g=g, h_norms=sc.h.norms,
                                    p=sc.p)


def cmd_bound(args) -> int:
    scenarios = _scenarios(args)
    records, rows = [], []
    for sc in scenarios:
        for n, rep in _reports(sc):
            records.append({"scenario": sc.id, "n": n, "seed": sc.seed, **rep.to_dict()})
            rows.append({"scenario": sc.id, "bound_id": rep.bound_id, "n": n,
                         "total": rep.total, "seed": sc.seed})
    doc = {"version": __version__, "reports": records}
    if not args.no_timestamp:
        doc = {"generated": _timestamp(), **doc}
    text_json = json.dumps(doc, indent=2, sort_keys=False) + "\n"
    text_csv = render_csv(BOUND_COLUMNS, rows, not args.no_timestamp)
    if args.out:
        _emit(args, "bounds.json", text_json)
        _emit(args, "bounds.csv", text_csv)
    else:
        sys.stdout.write(text_csv if args.format == "csv" else text_json)
    return 0


def _distances(sc: Scenario, jobs):
    for n in sc.n_grid:
        g = sc.g_for(n)
        yield n, g, distance(g, sc.h, sc.blocks(g), n, sc.N, sc.seed, jobs=jobs)


def _n_label(n):
    return n if not isinstance(n, list) else ";".join(map(str, n))


def cmd_rate(args) -> int:
    scenarios = _scenarios(args)
    rows, status = [], 0
    for sc in scenarios:
        if any(isinstance(n, list) for n in sc.n_grid):
            raise ConfigError(f"{sc.id}.n_grid", "rate fits need a scalar n grid")
        try:
            _check_grid(sc.n_grid)
        except DomainError as exc:
            raise ConfigError(f"{sc.id}.n_grid", str(exc)) from None
        points = [RatePoint(int(n), est.mean, est.stderr) for n, _, est in _distances(sc, args.jobs)]
        try:
            fit = fit_points(points)
            summary = {"slope": fit.slope, "slope_stderr": fit.slope_stderr,
                       "intercept": fit.intercept}
        except InsufficientSignalError as exc:
            print(f"error: {sc.id}: insufficient signal: {exc}", file=sys.stderr)
            summary, status = {}, 1
        for pt in points:
            rows.append({"scenario": sc.id, "n": pt.n, "N": sc.N, "delta_mean": pt.delta,
                         "delta_stderr": pt.stderr, "significant": pt.significant,
                         "seed": sc.seed, **summary})
    _emit(args, "rate.csv", render_csv(RATE_COLUMNS, rows, not args.no_timestamp))
    return status


def cmd_distance(args) -> int:
    scenarios = _scenarios(args)
    rows = []
    for sc in scenarios:
        for n, g, est in _distances(sc, args.jobs):
            base = {"scenario": sc.id, "n": _n_label(n), "N": sc.N, "delta_mean": est.mean,
                    "delta_stderr": est.stderr, "seed": sc.seed}
            if not sc.bounds:
                rows.append(base)
            for bid in sc.bounds:
                total = evaluate_bound(bid, dists=sc.blocks(g), n=n, g=g, h_norms=sc.h.norms,
                                       p=sc.p).total
                margin = total - (abs(est.mean) - SIGNIFICANCE * est.stderr)
                rows.append({**base, "bound_total": total, "margin": margin, "bound_id": bid})
    _emit(args, "distance.csv", render_csv(DISTANCE_COLUMNS, rows, not args.no_timestamp))
    return 0


def _solve_grid(sc: Scenario, dim: int) -> np.ndarray:
    if sc.solve_grid is not None:
        pts = np.asarray(sc.solve_grid, dtype=float)
        if dim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[1] != dim:
            raise ConfigError(f"{sc.id}.solve_grid", f"points must have {dim} coordinates")
        return pts
    if dim == 1:
        return np.linspace(-3.0, 3.0, 13).reshape(-1, 1)
    axis = np.linspace(-2.0, 2.0, 5)
    return np.array(list(itertools.product(axis, repeat=dim)))


def cmd_solve(args) -> int:
    from .stein_solver import solve_f, stein_residual

    scenarios = _scenarios(args)
    rows, columns = [], None
    for sc in scenarios:
        g = sc.g
        if g.dim > 2:
            raise DimensionError(f"{sc.id}: the solver handles d <= 2, got d = {g.dim}")
        pts = _solve_grid(sc, g.dim)
        arg = pts[:, 0] if g.dim == 1 else pts
        fvals = np.atleast_1d(solve_f(arg, g, sc.h))
        res = np.atleast_1d(stein_residual(arg, g, sc.h))
        cols = SOLVE_COLUMNS_1D if g.dim == 1 else ["scenario", "w1", "w2", "f", "residual", "seed"]
        if columns is not None and cols != columns:
            raise ConfigError("scenarios", "solve needs scenarios of one dimension per run")
        columns = cols
        for p, fv, rv in zip(pts, fvals, res):
            row = {"scenario": sc.id, "f": float(fv), "residual": float(rv), "seed": sc.seed}
            if g.dim == 1:
                row["w"] = float(p[0])
            else:
                row["w1"], row["w2"] = float(p[0]), float(p[1])
            rows.append(row)
    _emit(args, "solve.csv", render_csv(columns, rows, not args.no_timestamp))
    return 0


def _selftest_checks() -> list[tuple[str, Callable[[], None]]]:
    from .combinatorics import DerivNormProfile, h_n, stirling2
    from .distributions import get_distribution, presets, std_normal_abs_moment
    from .gfunctions import get_gfunction
    from .montecarlo import estimate_EhgW
    from .stein_bounds import cor41_chisq_wasserstein
    from .stein_solver import SolverConfig, expected_derivative_at_Z, stein_residual
    from .sum_moments import exact_moment_W
    from scipy.integrate import quad
    from .testfunctions import get_testfunction

    def bell_numbers():
        bell = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975]
        for n in range(1, 11):
            assert sum(stirling2(n, k) for k in range(n + 1)) == bell[n], n

    def h3_unit():
        assert h_n(3, DerivNormProfile([1, 1, 1])) == 5

    def abs_moments():
        for r in (0.5, 1.0, 3.0, 4.5):
            q = 2 * quad(lambda z: z ** r * math.exp(-z * z / 2), 0, np.inf, epsabs=0,
                         epsrel=1e-13)[0] / math.sqrt(2 * math.pi)
            assert abs(q - std_normal_abs_moment(r)) < 1e-10, r

    def fourth_moment():
        for dist in presets():
            for n in (4, 64):
                want = 3 + (dist.moment(4) - 3) / n
                assert abs(exact_moment_W(dist, n, 4) - want) < 1e-10, (dist.name, n)

    def cor41_value():
        value = cor41_chisq_wasserstein(1, 100, get_distribution("rademacher"), 1.0).total
        want = 4.8 * (1 + math.sqrt(2 / math.pi) + 0.1)
        assert abs(value / want - 1) < 1e-6, value

    def residual():
        g, h = get_gfunction({"name": "square_sum", "d": 1}), get_testfunction("sin")
        res = stein_residual(np.linspace(-2, 2, 5), g, h, SolverConfig(outer_nodes=64))
        assert float(np.max(res)) < 1e-4, res

    def even_symmetry():
        g, h = get_gfunction({"name": "square_sum", "d": 1}), get_testfunction("sin")
        assert abs(expected_derivative_at_Z(3, g, h)) < 1e-6

    def determinism():
        g, h = get_gfunction({"name": "square_sum", "d": 1}), get_testfunction("sin")
        a = estimate_EhgW(g, h, "standardized_exponential", 16, 300_000, 7, jobs=1)
        b = estimate_EhgW(g, h, "standardized_exponential", 16, 300_000, 7, jobs=3)
        assert a.mean == b.mean and a.stderr == b.stderr

    def constant_zero_variance():
        g, h = get_gfunction({"name": "square_sum", "d": 1}), get_testfunction(
            {"name": "constant", "value": 2.5})
        est = estimate_EhgW(g, h, "rademacher", 10, 5000, 1)
        assert est.mean == 2.5 and est.stderr == 0.0

    return [("bell_numbers", bell_numbers), ("h3_unit_norms", h3_unit),
            ("normal_abs_moments", abs_moments), ("fourth_moment_W", fourth_moment),
            ("cor41_value", cor41_value), ("stein_residual_1d", residual),
            ("even_g_third_derivative", even_symmetry), ("jobs_determinism", determinism),
            ("constant_h_zero_variance", constant_zero_variance)]


def cmd_selftest(args) -> int:
    failed = 0
    for name, check in _selftest_checks():
        start = time.perf_counter()
        try:
            check()
            status = "PASS"
        except Exception as exc:  # report every failure, keep going
            status, failed = f"FAIL ({type(exc).__name__}: {exc})", failed + 1
        print(f"{status:4s} {name} [{time.perf_counter() - start:.2f}s]")
    print(f"{failed} failed" if failed else "all checks passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON scenario config")
    common.add_argument("--preset", action="append", choices=sorted(PRESETS),
                        help="built-in scenario (repeatable) instead of --config")
    common.add_argument("--scenario", dest="only", action="append", metavar="ID",
                        help="only run the scenario with this id (repeatable)")
    common.add_argument("--out", metavar="DIR", help="write files here instead of stdout")
    common.add_argument("--seed", type=int, help="override every scenario's seed")
    common.add_argument("--samples", type=int, help="override every scenario's N")
    common.add_argument("--no-timestamp", action="store_true",
                        help="omit the generated-at header so output is byte-reproducible")
    common.add_argument("--jobs", type=int, help="worker threads for Monte Carlo")

    parser = argparse.ArgumentParser(prog="steinapprox", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("bound", parents=[common], help="evaluate the scenario bounds")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_bound)
    sub.add_parser("rate", parents=[common], help="fit the convergence exponent"
                   ).set_defaults(func=cmd_rate)
    sub.add_parser("distance", parents=[common], help="simulated distance against the bounds"
                   ).set_defaults(func=cmd_distance)
    sub.add_parser("solve", parents=[common], help="tabulate the Stein solution and residual"
                   ).set_defaults(func=cmd_solve)
    sub.add_parser("selftest", help="run the built-in invariant checks"
                   ).set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except HypothesisError as exc:
        print(f"error: hypothesis not satisfied: {exc}", file=sys.stderr)
        return 2
    except VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (AccuracyError, InsufficientSignalError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
