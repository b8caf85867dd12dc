"""Command-line front end.

Exit codes: 0 success, 1 comparison failed, 2 usage or config error,
3 runtime error. Errors go to stderr prefixed with ``error:``.
"""
from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

import numpy as np

from . import errors
from .engine import REALIZATION_COLUMNS, realization_csv, run, sample_uncover_times
from .ensemble import (DEFAULT_GRID, EnsembleStats, ExperimentSpec, brute_force_oracle, compare,
                       gaussianity_screen, run_ensemble)
from .generators import ModelSpec, degree_mixture, generate
from .graph import degree_stats, limit_params, read_edgelist, write_edgelist
from .martingales import martingale_paths
from .models import KINDS, CovarianceModel, model_table_csv, parse_model_csv

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2, 3

MARTINGALE_COLUMNS = ("Q", "S", "Nbar", "R", "Qt", "St", "Nt", "Rt")

# errors that mean "the request was malformed" rather than "the run broke"
USAGE_ERRORS = (errors.InvalidSpec, errors.SpecInvalid, errors.GraphError, errors.BadScale,
                errors.NotRegular, errors.TooLarge, errors.GridMismatch, errors.DimensionMismatch,
                errors.OutOfDomain)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def load_schema() -> dict:
    text = resources.files("uncover").joinpath("schemas/experiment.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def load_config(path: str) -> dict:
    import jsonschema

    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    try:
        jsonschema.validate(cfg, load_schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise UsageError(f"config {path}: {where}: {exc.message}") from None
    return cfg


def spec_from_config(cfg: dict) -> ExperimentSpec:
    model = dict(cfg["model"])
    n = cfg["n"]
    mix = model.pop("degree_mixture", None)
    if mix is not None:
        model["degrees"] = degree_mixture(n, mix["a"], mix["b"])
    model_spec = ModelSpec.from_dict({**model, "n": n})
    return ExperimentSpec(
        model_spec=model_spec,
        replicates=cfg["replicates"],
        grid=tuple(cfg.get("grid", DEFAULT_GRID)),
        process=cfg["process"],
        regime=cfg.get("regime", "sparse"),
        beta_n=cfg.get("beta_n"),
        seed=cfg["seed"],
    )


def plugin_params(kind: str, spec: ExperimentSpec) -> dict:
    """Finite-n parameters from the graph of replicate 0 (the graph itself
    when the model is deterministic)."""
    graph = generate(spec.model_spec, np.random.default_rng([spec.seed, 0]))
    stats = degree_stats(graph)
    regime = "regular" if kind in ("DiscreteB", "ContinuousB") else spec.regime
    if kind.startswith("Components"):
        regime = "sparse"
    lp = limit_params(stats, graph.n, regime, spec.beta_n)
    return {
        "dstar": lp.dstar, "chistar": lp.chistar, "gammastar": lp.gammastar, "d_inf": lp.d_inf,
        "lambda1": lp.lambda1, "lambda2": lp.lambda2, "alpha": lp.alpha,
    }


def theory_model(block: dict, spec: ExperimentSpec) -> CovarianceModel:
    kind = _kind(block["kind"])
    params = dict(block.get("params", {}))
    needed = [p for p in KINDS[kind][1] if p not in params]
    if needed:
        auto = plugin_params(kind, spec)
        for p in needed:
            if auto.get(p) is None:
                raise UsageError(f"theory parameter {p!r} for {kind} is not given and cannot be derived")
            params[p] = auto[p]
    return CovarianceModel(kind, params)


def _kind(name: str) -> str:
    lookup = {k.lower(): k for k in KINDS}
    key = name.strip().replace("-", "_").lower()
    if key not in lookup:
        raise UsageError(f"unknown model kind {name!r}; expected one of {', '.join(KINDS)}")
    return lookup[key]


def _parse_grid(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"bad grid {text!r}; expected comma-separated numbers") from None


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def cmd_generate(args) -> int:
    fields = {"kind": args.model, "n": args.n}
    if args.m is not None:
        fields["m"] = args.m
    if args.p is not None:
        fields["p"] = args.p
    if args.offspring is not None:
        fields["offspring"] = args.offspring
    if args.degrees is not None:
        fields["degrees"] = tuple(int(x) for x in args.degrees.split(","))
    graph = generate(ModelSpec(**fields), np.random.default_rng(args.seed))
    if args.out == "-":
        sys.stdout.write(graph.to_text())
    else:
        write_edgelist(graph, args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    graph = read_edgelist(args.graph)
    assignment = sample_uncover_times(graph.n, np.random.default_rng(args.seed))
    real = run(graph, assignment, track_triangles=args.triangles)
    extra = {}
    if args.martingales:
        mp = martingale_paths(graph, assignment, real)
        times = np.concatenate([[0.0], assignment.tau])
        below_one = times < 1
        for name in MARTINGALE_COLUMNS:
            path = getattr(mp, name)
            vals = np.full(times.size, np.nan)
            vals[below_one] = path.eval(times[below_one])
            if not name.endswith("t"):
                vals[~below_one] = path.eval(times[~below_one])
            extra[name] = vals
    _write(args.out, realization_csv(real, extra))
    return EXIT_OK


def cmd_theory(args) -> int:
    kind = _kind(args.regime)
    params = {}
    for item in args.params or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"bad parameter {item!r}; expected name=value")
        try:
            params[key.strip()] = float(val)
        except ValueError:
            raise UsageError(f"parameter {key!r} is not a number: {val!r}") from None
    model = CovarianceModel(kind, params)
    grid = _parse_grid(args.grid) if args.grid else DEFAULT_GRID
    _write(args.out, model_table_csv(model, grid))
    return EXIT_OK


def _finish_ensemble(stats: EnsembleStats, spec: ExperimentSpec, cfg: dict) -> int:
    out = cfg.get("output", {})
    payload = stats.to_dict()
    payload["spec"] = spec.to_dict()
    payload["gaussianity"] = gaussianity_screen(stats)
    code = EXIT_OK
    if "theory" in cfg:
        block = cfg["theory"]
        model = theory_model(block, spec)
        rep = compare(stats, model, abs_tol=block.get("abs_tol", 0.02), z_tol=block.get("z_tol", 5.0),
                      rel_tol=block.get("rel_tol"))
        payload["theory"] = model.to_dict()
        payload["comparison"] = rep.to_dict()
        if "report" in out:
            _write(out["report"], rep.to_json())
        code = EXIT_OK if rep.passed else EXIT_FAIL
    _write(out.get("stats", "-"), json.dumps(payload, sort_keys=True, indent=1) + "\n")
    if "cov_csv" in out:
        _write(out["cov_csv"], stats.cov_csv())
    return code


def cmd_ensemble(args) -> int:
    cfg = load_config(args.config)
    spec = spec_from_config(cfg)
    stats = run_ensemble(spec, workers=args.workers)
    return _finish_ensemble(stats, spec, cfg)


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def cmd_compare(args) -> int:
    try:
        stats = EnsembleStats.from_dict(json.loads(_read_text(args.stats)))
    except (json.JSONDecodeError, KeyError) as exc:
        raise UsageError(f"{args.stats} is not an ensemble stats file: {exc}") from None
    text = _read_text(args.theory)
    if text.lstrip().startswith("{"):
        model = CovarianceModel.from_dict(json.loads(text))
    else:
        model = parse_model_csv(text)
    rep = compare(stats, model, abs_tol=args.abs_tol, z_tol=args.z_tol, rel_tol=args.rel_tol)
    _write(args.out, rep.to_json())
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_oracle(args) -> int:
    graph = read_edgelist(args.graph)
    mom = brute_force_oracle(graph, args.k)
    _write(args.out, json.dumps(mom.to_dict(), sort_keys=True, indent=1) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="uncover", description="Simulate random vertex uncovering on graphs and check limit covariances.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="draw a graph and write it as an edge list")
    g.add_argument("--model", required=True, help="labelled_tree, cond_gw, bst, recursive_tree, gnm, gnp, config, path, cycle, complete_bipartite")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True, help="edge-list path ('-' for stdout); first line 'n m', then 'u v' per edge")
    g.add_argument("--m", type=int, help="edge count for gnm")
    g.add_argument("--p", type=float, help="edge probability for gnp")
    g.add_argument("--offspring", help="poisson1, binomial2 or geometric for cond_gw")
    g.add_argument("--degrees", help="comma-separated degree list for config")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser(
        "simulate",
        help="run one uncovering and write its paths as CSV",
        description="CSV columns: " + ",".join(REALIZATION_COLUMNS)
        + " (one row per event, first row is time 0); with --martingales also "
        + ",".join(MARTINGALE_COLUMNS) + " (tilde columns empty at time 1). T is empty without --triangles.",
    )
    s.add_argument("--graph", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.add_argument("--martingales", action="store_true")
    s.add_argument("--triangles", action="store_true")
    s.set_defaults(func=cmd_simulate)

    t = sub.add_parser(
        "theory",
        help="tabulate a limit covariance on a grid",
        description="CSV: header 's,t1,...', one row per s, final row 'mean'.",
    )
    t.add_argument("--regime", required=True, help="model kind: " + ", ".join(KINDS))
    t.add_argument("--params", nargs="*", metavar="NAME=VALUE", help="e.g. dstar=2 gammastar=1")
    t.add_argument("--grid", help="comma-separated times (default 0.1,...,0.9)")
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_theory)

    e = sub.add_parser("ensemble", help="Monte Carlo run described by a JSON config")
    e.add_argument("--config", required=True)
    e.add_argument("--workers", type=int, default=None, help="worker processes (default: CPU count); output does not depend on it")
    e.set_defaults(func=cmd_ensemble)

    c = sub.add_parser("compare", help="compare ensemble stats with a theory table; exit 1 on failure")
    c.add_argument("--stats", required=True)
    c.add_argument("--theory", required=True, help="CSV from 'theory' or a model JSON")
    c.add_argument("--out", default="-")
    c.add_argument("--abs-tol", type=float, default=0.02)
    c.add_argument("--rel-tol", type=float, default=None)
    c.add_argument("--z-tol", type=float, default=5.0)
    c.set_defaults(func=cmd_compare)

    o = sub.add_parser("oracle", help="exact moments after k uncoverings by enumeration (n <= 8)")
    o.add_argument("--graph", required=True)
    o.add_argument("--k", type=int, required=True)
    o.add_argument("--out", default="-")
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, *USAGE_ERRORS) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except errors.UncoverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
