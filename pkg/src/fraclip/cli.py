"""Command-line entry point: region, check-weights, construct, verify, experiment.

Exit codes: 0 pass, 1 experiment failure, 2 configuration or usage error,
3 infinite class quantity, 4 trivial region, 5 degenerate run.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .config import ConfigError, RunConfig, config_hash, load_config_file, parse_config
from .experiments import (DEGENERATE, PASS, ExperimentReport, run_boundedness_experiment,
                          run_construction_check, run_corollary_equivalence, run_local_lemma_experiment,
                          run_power_asymptotic, run_triviality_probe, verify_identity_suites)
from .geometry import standard_family
from .operators import kernel_from_json, symbol_from_json, test_function_from_json
from .params import PANELS, ExponentVector, ParameterPoint, region_grid, tau
from .reports import profile_rows, write_csv, write_json
from .weights.classes import (SigmaPattern, a_p_quantity, a_pq_quantity, doubling_quantity,
                              empirical_class_sup, hm_full_quantity, hm_global_quantity,
                              hm_local_quantity, hm_sigma_quantity, rh_quantity)
from .weights.construct import ConstructionError, construct_weights
from .weights.forms import WeightVector

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_INFINITE, EXIT_TRIVIAL, EXIT_DEGENERATE = 0, 1, 2, 3, 4, 5

log = logging.getLogger("fraclip")


def _meta(cfg_hash: str, seed) -> dict:
    return {"config_hash": cfg_hash, "seed": seed}


# -- region ----------------------------------------------------------------------

def cmd_region(args) -> int:
    raw = {"command": "region", "panel": args.panel, "resolution": args.resolution, "m": args.m,
           "n": args.n, "delta": args.delta, "beta": args.beta, "seed": args.seed}
    h = config_hash(raw)
    try:
        grid = region_grid(args.panel, args.resolution, n=args.n, m=args.m, delta=args.delta,
                           beta=args.beta)
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    out = Path(args.out)
    stem = f"region_{args.panel}"
    write_csv(out / f"{stem}.csv", ["panel", "inv_p", "delta_tilde", "tag"], grid.rows(), _meta(h, args.seed))
    edge_rows = [(e["inv_p"], e["tau"], e["natural"]) for e in grid.edges()]
    write_csv(out / f"{stem}_edges.csv", ["inv_p", "tau", "beta_minus_n_over_p"], edge_rows, _meta(h, args.seed))
    write_json(out / f"{stem}.json", {"config_hash": h, "seed": args.seed, "panel": args.panel, "point": grid.point.as_json(),
                                      "tau": tau(grid.point), "edges": grid.edges(),
                                      "cells": [{"inv_p": x, "delta_tilde": y, "tag": rc.label}
                                                for x, y, rc in grid.cells]})
    print(f"wrote {out / stem}.csv ({len(grid.cells)} cells)")
    return EXIT_OK


# -- check-weights ---------------------------------------------------------------

def _need(cfg: RunConfig, *names):
    for name in names:
        if getattr(cfg, name) is None:
            raise ConfigError(f"config needs {name!r} for this command")


def _sweep(cfg: RunConfig, name: str):
    pair, p, point, fam, jobs = cfg.weights, cfg.p, cfg.point, cfg.family, cfg.jobs
    if name in ("hm_full", "hm_local", "hm_global"):
        _need(cfg, "weights", "p", "point")
        fn = {"hm_full": hm_full_quantity, "hm_local": hm_local_quantity,
              "hm_global": hm_global_quantity}[name]
        return empirical_class_sup(fn, (pair, p, point), fam, jobs)
    if name == "hm_sigma":
        _need(cfg, "weights", "p", "point", "sigma")
        return empirical_class_sup(_sigma_quantity, (pair, p, point, cfg.sigma), fam, jobs)
    if name == "apq":
        _need(cfg, "weights", "p")
        return empirical_class_sup(a_pq_quantity, (list(pair.v), p, cfg.q), fam, jobs)
    if name == "ap":
        _need(cfg, "weights", "p")
        return empirical_class_sup(a_p_quantity, (list(pair.v), p), fam, jobs)
    if name == "rh":
        _need(cfg, "weights")
        return rh_quantity(pair.w, cfg.rh_s, fam, jobs)
    if name == "doubling":
        _need(cfg, "weights")
        return doubling_quantity(pair.w, fam, jobs)
    raise ConfigError(f"unknown quantity {name!r}")


def _sigma_quantity(pair, p, point, bits, B):
    return hm_sigma_quantity(pair, p, point, B, SigmaPattern(bits))


def cmd_check_weights(cfg: RunConfig) -> int:
    _need(cfg, "weights")
    out, h = cfg.output_dir, cfg.config_hash
    summary = {}
    code = EXIT_OK
    for name in cfg.quantities:
        sweep = _sweep(cfg, name)
        rows = [(i, b.radius, b.center[0], v) for i, (b, v) in enumerate(sweep.profile)]
        write_csv(out / f"{cfg.prefix}{name}_profile.csv", ["ball", "radius", "center", "value"], rows,
                  _meta(h, cfg.seed))
        entry = {"sup": sweep.sup, "argmax": sweep.argmax.as_json(), "finite": sweep.finite}
        if sweep.finite:
            entry["extension_growth"] = sweep.extension_growth()
            entry["slope"] = sweep.slope()
        summary[name] = entry
        status = "finite" if sweep.finite else "infinite"
        print(f"{name}: sup = {sweep.sup:.17g} ({status}) at R = {sweep.argmax.radius:.6g}, "
              f"center = {sweep.argmax.center[0]:.6g}")
        if not sweep.finite:
            code = EXIT_INFINITE
    write_json(out / f"{cfg.prefix}check_weights.json",
               {"config_hash": h, "seed": cfg.seed, "weights": cfg.weights.as_json(), "summary": summary,
                "note": "finite sups are empirical evidence over the family, not proofs of membership"})
    return code


# -- construct -------------------------------------------------------------------

def cmd_construct(cfg: RunConfig) -> int:
    _need(cfg, "point", "p")
    try:
        pair, recipe = construct_weights(cfg.point, cfg.p)
    except ConstructionError as exc:
        msg = str(exc)
        if exc.region is not None:
            msg = f"{exc.region.label}: {exc.region.explain()}"
        print(f"no construction: {msg}", file=sys.stderr)
        return EXIT_TRIVIAL if (exc.region is not None and exc.region.is_trivial) else EXIT_CONFIG
    spec = {"command": "check-weights", "point": cfg.point.as_json(), "p": cfg.p.as_json(),
            "weights": pair.as_json(), "quantities": ["hm_full"], "family": {"kind": "standard"},
            "seed": cfg.seed, "notes": {"recipe": recipe.as_json(), "source_config_hash": cfg.config_hash}}
    path = write_json(cfg.output_dir / f"{cfg.prefix}weights_{recipe.case}.json", spec)
    print(f"case ({recipe.case}): rho = {recipe.rho:.17g}, xi = {list(recipe.xi)} -> {path}")
    return EXIT_OK


# -- verify / experiment ---------------------------------------------------------

VERIFY_SUITES = ("identities", "asymptotic", "probes", "constructions", "all")

CONSTRUCTION_POINTS = {
    "a": (1.5, (4.0, 4.0), -0.3),
    "b": (1.0, (1.0, 2.0), -0.6),
    "c": (1.5, (4.0, 4.0), -0.1),
    "d": (0.9, (2.0, 2.0), -0.4),
    "e": (0.9, (2.0, 2.0), -0.2),
    "f": (1.0, (1.0, 2.0), -1.0),
}


def construction_point(case: str, delta: float = 0.3) -> tuple:
    beta, p, dt = CONSTRUCTION_POINTS[case]
    return ParameterPoint(n=1, m=2, beta=beta, delta=delta, delta_tilde=dt), ExponentVector(list(p))


def probe_point(gap: float) -> tuple:
    """Constant weights with beta - n/p = delta, so the forced local exponent is delta - delta~."""
    from .weights.forms import Constant

    p = ExponentVector([2.0, 2.0])
    point = ParameterPoint(n=1, m=2, beta=1.3, delta=0.3, delta_tilde=0.3 + gap)
    return WeightVector(Constant(1.0), [Constant(1.0)] * 2), p, point


def run_suite(suite: str, seed: int, jobs: int = 1) -> list:
    reports = []
    if suite in ("identities", "all"):
        reports.append(verify_identity_suites(seed))
    if suite in ("asymptotic", "all"):
        reports += [run_power_asymptotic(a) for a in (-0.5, 0.0, 1.0)]
    if suite in ("probes", "all"):
        for gap in (0.1, 0.2):
            pair, p, point = probe_point(gap)
            reports.append(run_triviality_probe(pair, p, point, "R_to_zero"))
    if suite in ("constructions", "all"):
        fam = standard_family()
        for case in CONSTRUCTION_POINTS:
            point, p = construction_point(case)
            reports.append(run_construction_check(point, p, fam, jobs=jobs))
    return reports


def _write_reports(reports: list, out: Path, prefix: str, h: str, seed) -> None:
    for k, rep in enumerate(reports):
        stem = f"{prefix}{k:02d}_{rep.experiment}"
        header, rows = profile_rows(rep.profile)
        if header:
            write_csv(out / f"{stem}.csv", header, rows, _meta(h, seed))
        write_json(out / f"{stem}.json", {"config_hash": h, **rep.as_json()})
        (out / f"{stem}.txt").write_text(rep.text() + "\n")


def _exit_for(reports: list) -> int:
    if any(r.status == DEGENERATE for r in reports):
        return EXIT_DEGENERATE
    if all(r.status == PASS for r in reports):
        return EXIT_OK
    return EXIT_FAIL


def cmd_verify(suite: str, cfg: RunConfig) -> int:
    reports = run_suite(suite, cfg.seed, cfg.jobs)
    _write_reports(reports, cfg.output_dir, cfg.prefix, cfg.config_hash, cfg.seed)
    for r in reports:
        print(f"{r.experiment}: {r.status}")
    return _exit_for(reports)


def _experiment_inputs(cfg: RunConfig, exp: dict):
    try:
        n = cfg.point.n
        m = cfg.point.m
        K = kernel_from_json(exp["kernel"], n, m) if "kernel" in exp else None
        bs = [symbol_from_json(b, n) for b in exp.get("symbols", [])]
        fs = [test_function_from_json(f, n) for f in exp.get("functions", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid experiment catalog entry: {exc}") from exc
    return K, bs, fs


def build_experiment(cfg: RunConfig) -> ExperimentReport:
    exp = cfg.experiment
    kind = exp.get("kind")
    if kind is None:
        raise ConfigError("experiment.kind is required")
    if kind == "asymptotic":
        alphas = exp.get("alphas", [-0.5, 0.0, 1.0])
        n = cfg.point.n if cfg.point is not None else 1
        return [run_power_asymptotic(float(a), n) for a in alphas]
    _need(cfg, "point", "p")
    point, p = cfg.point, cfg.p
    if kind == "construction":
        return [run_construction_check(point, p, cfg.family, jobs=cfg.jobs)]
    pair = cfg.weights
    if pair is None and exp.get("construct"):
        pair, _ = construct_weights(point, p)
    if pair is None:
        raise ConfigError("experiment needs weights (or experiment.construct = true)")
    if kind == "triviality":
        return [run_triviality_probe(pair, p, point, exp.get("direction", "R_to_zero"))]
    if kind == "corollary":
        return [run_corollary_equivalence(list(pair.v), p, point, cfg.family)]
    K, bs, fs = _experiment_inputs(cfg, exp)
    if len(fs) != point.m:
        raise ConfigError(f"need {point.m} test functions")
    if kind == "boundedness":
        if K is None or len(bs) != point.m:
            raise ConfigError("boundedness needs a kernel and one symbol per slot")
        return [run_boundedness_experiment(exp.get("variant", "sum"), K, bs, fs, pair, p, point,
                                           cfg.family, cfg.quadrature, mode=exp.get("mode", "direct"),
                                           inputs=exp.get("inputs", "fixed"))]
    if kind == "local_lemma":
        at = exp.get("alpha_tilde", point.beta)
        return [run_local_lemma_experiment(fs, float(at), pair, p, point, cfg.family, cfg.quadrature)]
    raise ConfigError(f"unknown experiment kind {kind!r}")


def cmd_experiment(cfg: RunConfig) -> int:
    try:
        reports = build_experiment(cfg)
    except ConstructionError as exc:
        print(f"no construction: {exc}", file=sys.stderr)
        return EXIT_TRIVIAL
    except ConfigError:
        raise
    except ValueError as exc:
        # inadmissible parameters and other precondition failures
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    _write_reports(reports, cfg.output_dir, cfg.prefix, cfg.config_hash, cfg.seed)
    for r in reports:
        print(r.text())
    return _exit_for(reports)


# -- argument parsing ------------------------------------------------------------

def _add_common(sp, config: bool = True):
    if config:
        sp.add_argument("--config", help="JSON or TOML run configuration")
    sp.add_argument("--out", help="output directory (overrides output.dir)")
    sp.add_argument("--seed", type=int, help="random seed (overrides seed)")
    sp.add_argument("--jobs", type=int, help="worker processes for ball sweeps (overrides jobs)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fraclip", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("region", help="rasterize the (1/p, delta~) plane for one panel")
    sp.add_argument("--panel", required=True, choices=PANELS)
    sp.add_argument("--resolution", type=int, default=64)
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--delta", type=float, default=0.3)
    sp.add_argument("--beta", type=float, default=None)
    sp.add_argument("--seed", type=int, default=0, help="recorded in the outputs; the grid is deterministic")
    sp.add_argument("--out", default=".")

    sp = sub.add_parser("check-weights", help="sweep class quantities over a ball family")
    _add_common(sp)
    sp.add_argument("--weights", help="weights file (e.g. written by construct)")

    sp = sub.add_parser("construct", help="explicit weights for a nontrivial point")
    _add_common(sp)
    sp.add_argument("--n", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--beta", type=float)
    sp.add_argument("--delta", type=float)
    sp.add_argument("--delta-tilde", type=float)
    sp.add_argument("--p", nargs="+", help="exponents p_1 ... p_m ('inf' allowed)")

    sp = sub.add_parser("verify", help="run a verification suite")
    _add_common(sp)
    sp.add_argument("--suite", default="identities", choices=VERIFY_SUITES)

    sp = sub.add_parser("experiment", help="run the experiment described by a config file")
    _add_common(sp)
    return ap


def _load(args) -> dict:
    data = load_config_file(args.config) if getattr(args, "config", None) else {}
    data = dict(data)
    if getattr(args, "weights", None):
        wdata = load_config_file(args.weights)
        data["weights"] = wdata.get("weights", wdata)
        for key in ("point", "p"):
            if key in wdata and key not in data:
                data[key] = wdata[key]
    if getattr(args, "seed", None) is not None:
        data["seed"] = args.seed
    if getattr(args, "jobs", None) is not None:
        data["jobs"] = args.jobs
    if getattr(args, "out", None) is not None:
        data["output"] = {**data.get("output", {}), "dir": args.out}
    if args.command == "construct":
        point = dict(data.get("point", {}))
        for flag, key in (("n", "n"), ("m", "m"), ("beta", "beta"), ("delta", "delta"),
                          ("delta_tilde", "delta_tilde")):
            val = getattr(args, flag)
            if val is not None:
                point[key] = val
        if point:
            data["point"] = point
        if args.p:
            data["p"] = args.p
    return data


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "region":
        return cmd_region(args)
    try:
        cfg = parse_config(_load(args))
        if args.command == "check-weights":
            return cmd_check_weights(cfg)
        if args.command == "construct":
            return cmd_construct(cfg)
        if args.command == "verify":
            return cmd_verify(args.suite, cfg)
        return cmd_experiment(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
