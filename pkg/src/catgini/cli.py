"""
Command-line interface: ``catgini {estimate,ci,oracle,simulate}``.

Exit codes: 0 success, 2 usage or input error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from pathlib import Path

from . import __version__
from .config import load_config, parse_methods
from .datasets import load_dataset
from .errors import CatGiniError, ConfigError, DegenerateSampleError, InvalidInputError
from .gmd import gini_correlation_point, gini_correlation_point_u, gini_covariance, summarize
from .intervals import FAILED, METHODS, WeakDependenceWarning, confidence_intervals
from .oracles import FAMILIES, FAMILY_ALIASES, closed_form, rho_monte_carlo
from .simulation import (RNG_ALGORITHM, SCHEMA_VERSION, StudyAbortedError, coverage_study,
                         format_summary, reports_to_json, reports_to_tsv)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _dump(doc: dict) -> str:
    doc = {"schema_version": SCHEMA_VERSION, **doc}
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=True)


def _split(value):
    return [v.strip() for v in value.split(",") if v.strip()] if value else None


def _add_data_args(p):
    p.add_argument("--data", required=True, help="CSV path, or 'iris' for the bundled data")
    p.add_argument("--label", help="label column name or 0-based index (default: last column)")
    p.add_argument("--features", help="comma-separated feature columns (default: all others)")
    p.add_argument("--delimiter", default=",", help="field delimiter (default ',')")
    p.add_argument("--no-header", action="store_true", help="the file has no header row")
    p.add_argument("--json", action="store_true", help="emit a JSON document")


def _load(args):
    delim = "\t" if args.delimiter in ("\\t", "tab") else args.delimiter
    return load_dataset(args.data, args.label, _split(args.features), delimiter=delim,
                        header=not args.no_header)


def cmd_estimate(args, out) -> int:
    sample = _load(args)
    s = summarize(sample)
    doc = {
        "n": s.n,
        "classes": {str(lab): int(c) for lab, c in zip(sample.labels, s.class_counts)},
        "rho_v": gini_correlation_point(sample, s),
        "rho_u": gini_correlation_point_u(sample, s),
        "gini_covariance": gini_covariance(sample, s),
        "gmd_v": s.v_pooled,
        "gmd_v_class": {str(lab): float(v) for lab, v in zip(sample.labels, s.v_class)},
        "gmd_u": s.u_pooled,
        "gmd_u_class": {str(lab): float(v) for lab, v in zip(sample.labels, s.u_class)},
    }
    if args.json:
        print(_dump({"kind": "estimate", **doc}), file=out)
        return EXIT_OK
    print(f"n = {doc['n']}, d = {sample.d}", file=out)
    print("class sizes: " + ", ".join(f"{k}={v}" for k, v in doc["classes"].items()), file=out)
    print(f"rho_g (V-statistic)  {doc['rho_v']:.6f}", file=out)
    print(f"rho_g (U-statistic)  {doc['rho_u']:.6f}", file=out)
    print(f"gini covariance      {doc['gini_covariance']:.6f}", file=out)
    print(f"gini mean difference {doc['gmd_v']:.6f}", file=out)
    for k, v in doc["gmd_v_class"].items():
        print(f"  class {k:<12} {v:.6f}", file=out)
    return EXIT_OK


def cmd_ci(args, out) -> int:
    sample = _load(args)
    methods = parse_methods(args.method)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", WeakDependenceWarning)
        cis = confidence_intervals(sample, methods, args.level, proportions=args.proportions)
    notes = sorted({str(w.message) for w in caught if issubclass(w.category, WeakDependenceWarning)})
    failed = any(ci.status == FAILED for ci in cis.values())
    point = next(iter(cis.values())).point
    if args.json:
        doc = {"kind": "confidence-intervals", "level": args.level, "point": point, "n": sample.n,
               "warnings": notes, "intervals": {m.upper(): ci.to_dict() for m, ci in cis.items()}}
        print(_dump(doc), file=out)
    else:
        print(f"point estimate (U-statistic) {point:.4f}, n = {sample.n}, level = {args.level}", file=out)
        for ci in cis.values():
            flag = "" if ci.status == "ok" else f"  [{ci.status}]"
            if ci.multimodal:
                flag += "  [multimodal]"
            print(f"{ci.method:<5} ({ci.lower:.4f}, {ci.upper:.4f})  length {ci.length:.4f}{flag}", file=out)
        for msg in notes:
            print(f"warning: {msg}", file=sys.stderr)
    return EXIT_NUMERICAL if failed else EXIT_OK


_ORACLE_PARAMS = ("p", "theta", "beta", "a", "r")


def cmd_oracle(args, out) -> int:
    given = {k: getattr(args, k) for k in _ORACLE_PARAMS if getattr(args, k) is not None}
    if args.config:
        if args.family or given:
            raise InvalidInputError("give either --config or --family with parameters, not both")
        cfg = load_config(args.config)
        seed = args.seed if args.seed is not None else cfg.seed
        if seed is None:
            raise ConfigError("the Monte Carlo oracle needs an explicit seed (--seed or 'seed:')")
        mc = rho_monte_carlo(cfg.scenario, args.n_total, seed)
        doc = {"kind": "oracle", "method": f"monte-carlo ({mc.method})", "scenario": cfg.scenario.name,
               "value": mc.estimate, "se": mc.se, "n_total": mc.n_total, "seed": seed,
               "rng": "numpy PCG64 default_rng"}
        text = f"{mc.estimate:.6f} (block SE {mc.se:.6f}, n_total = {mc.n_total})"
    else:
        if not args.family:
            raise InvalidInputError("either --family or --config is required")
        name = FAMILY_ALIASES.get(args.family, args.family)
        if name not in FAMILIES:
            raise InvalidInputError(f"unknown family {args.family!r}; choose from "
                                    f"{sorted(FAMILIES) + sorted(FAMILY_ALIASES)}")
        value = closed_form(name, **given)
        doc = {"kind": "oracle", "method": "closed-form", "family": name, "params": given, "value": value}
        text = f"{value:.6f}"
    print(_dump(doc) if args.json else text, file=out)
    return EXIT_OK


def cmd_simulate(args, out) -> int:
    cfg = load_config(args.config)
    cfg = cfg.with_overrides(
        seed=args.seed, replications=args.replications, batches=args.batches, n=args.n,
        methods=parse_methods(args.methods) if args.methods else None, level=args.level,
    )
    if cfg.seed is None:
        raise ConfigError(f"{args.config}: no seed given; an explicit seed (--seed or 'seed:') is required")
    if cfg.n is None:
        raise ConfigError(f"{args.config}: no sample size given ('n:' or --n)")
    if cfg.rho_true is None:
        raise ConfigError(f"{args.config}: 'rho_true' is required; obtain it with `catgini oracle`")
    reports = coverage_study(
        cfg.scenario, cfg.n, cfg.methods, cfg.level, cfg.replications, cfg.batches, cfg.rho_true,
        cfg.seed, allocation=cfg.allocation, proportions=cfg.proportions, workers=args.workers,
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"{cfg.scenario.name or 'scenario'}_n{cfg.n}"
    (out_dir / f"{stem}.tsv").write_text(reports_to_tsv(reports), encoding="utf-8")
    json_text = reports_to_json(reports, config=str(args.config))
    (out_dir / f"{stem}.json").write_text(json_text, encoding="utf-8")
    if args.json:
        out.write(json_text)
    else:
        print(f"{cfg.scenario.name}: rho_true = {cfg.rho_true}, {cfg.replications} x {cfg.batches}, "
              f"seed {cfg.seed} ({RNG_ALGORITHM})", file=out)
        print(format_summary(reports), file=out)
        print(f"wrote {out_dir / (stem + '.tsv')} and {out_dir / (stem + '.json')}", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="catgini", description="Categorical Gini correlation tools")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="point estimates and distance summaries")
    _add_data_args(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("ci", help="confidence intervals")
    _add_data_args(p)
    p.add_argument("--method", default="all", help=f"one of {', '.join(METHODS)}, all, or a comma list")
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--proportions", choices=("resample", "fixed"), default="resample",
                   help="class-proportion convention for the pseudo-values")
    p.set_defaults(func=cmd_ci)

    p = sub.add_parser("oracle", help="population value by closed form or Monte Carlo")
    p.add_argument("--family", help="exponential-pair, normal-location-pair or normal-scale-pair")
    p.add_argument("--p", type=float, help="weight of the first class")
    p.add_argument("--theta", type=float, help="mean of the first exponential class")
    p.add_argument("--beta", type=float, help="mean of the second exponential class")
    p.add_argument("--a", type=float, help="standardized mean gap")
    p.add_argument("--r", type=float, help="standard-deviation ratio")
    p.add_argument("--config", help="scenario file for a Monte Carlo value")
    p.add_argument("--n-total", type=int, default=1_000_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("simulate", help="coverage study from a scenario file")
    p.add_argument("--config", required=True, help="scenario file, or the name of a bundled one")
    p.add_argument("--seed", type=int)
    p.add_argument("--replications", type=int)
    p.add_argument("--batches", type=int)
    p.add_argument("--n", type=int, help="override the sample size")
    p.add_argument("--methods", help="comma-separated subset of methods")
    p.add_argument("--level", type=float)
    p.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("--out-dir", default=".", help="directory for the TSV and JSON reports")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    level = getattr(args, "level", None)
    if level is not None and not (0.0 < level < 1.0 and math.isfinite(level)):
        parser.error(f"--level must lie in (0, 1), got {level}")
    try:
        return args.func(args, out)
    except (DegenerateSampleError, StudyAbortedError) as exc:
        print(f"catgini: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (InvalidInputError, ConfigError, OSError) as exc:
        print(f"catgini: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CatGiniError as exc:
        print(f"catgini: error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
