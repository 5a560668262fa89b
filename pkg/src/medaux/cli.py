"""Command-line front end.

Subcommands:

* ``params``    extract or load the population parameter vector
* ``table``     analytic minimum-MSE comparison table
* ``simulate``  SRSWOR replication with empirical vs analytic columns
* ``compare``   the five dominance checks with margins

Exit codes: 0 success, 1 data or computation error, 2 usage error.
The default output format comes from ``MEDAUX_FORMAT`` (csv, json or md).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from importlib.resources import files

from . import montecarlo, mse
from .errors import MedauxError, UnknownEstimatorError
from .montecarlo import SimulationConfig, SyntheticSpec
from .population import (
    HistogramDensity,
    KernelDensity,
    KnownDensity,
    MedianParams,
    compute_params,
    load_params,
    load_population,
)

COLUMNS = ("estimator", "analytic_mse", "analytic_bias", "empirical_mse", "pre")
FORMATS = ("csv", "json", "md")
_BUILTIN_PARAMS = {
    "popi": "popI.json",
    "pop1": "popI.json",
    "popii": "popII.json",
    "pop2": "popII.json",
}


@dataclass(frozen=True)
class RenderedTable:
    """Rows conforming to the fixed column schema, plus a format tag."""

    rows: tuple[dict, ...]
    format: str
    extra: dict | None = None  # json-only payload (config and params echo)


def _default_format() -> str:
    env = os.environ.get("MEDAUX_FORMAT", "csv").lower()
    return env if env in FORMATS else "csv"


def _fmt_cell(value, precision: int) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.{precision}f}"
    return str(value)


def render_table(table: RenderedTable, precision: int) -> str:
    """Render to csv/md at display precision, or to full-precision json."""
    if table.format == "json":
        payload: dict = {"rows": [dict(r) for r in table.rows]}
        if table.extra:
            payload.update(table.extra)
        return json.dumps(payload, indent=2) + "\n"
    if table.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        for row in table.rows:
            writer.writerow([_fmt_cell(row[c], precision) for c in COLUMNS])
        return buf.getvalue()
    if table.format == "md":
        lines = ["| " + " | ".join(COLUMNS) + " |"]
        lines.append("|" + "|".join(" --- " for _ in COLUMNS) + "|")
        for row in table.rows:
            lines.append(
                "| " + " | ".join(_fmt_cell(row[c], precision) for c in COLUMNS) + " |"
            )
        return "\n".join(lines) + "\n"
    raise MedauxError(f"unknown format {table.format!r}")


def _resolve_params_path(value: str) -> str:
    builtin = _BUILTIN_PARAMS.get(value.strip().lower())
    if builtin is not None:
        return str(files("medaux.data").joinpath(builtin))
    return value


def _load_params_arg(value: str, lenient: bool) -> MedianParams:
    return load_params(_resolve_params_path(value), strict=not lenient)


def _density_methods(args) -> tuple:
    if args.density == "kernel":
        return KernelDensity(), KernelDensity()
    if args.density == "histogram":
        return HistogramDensity(), HistogramDensity()
    if args.fy is None or args.fx is None:
        raise MedauxError("--density known requires --fy and --fx values")
    return KnownDensity(args.fy), KnownDensity(args.fx)


def _parse_synthetic(text: str) -> SyntheticSpec:
    kwargs: dict[str, float] = {}
    for part in text.split(","):
        if not part.strip():
            continue
        key, _, value = part.partition("=")
        key = key.strip()
        if not value:
            raise MedauxError(f"synthetic spec entry {part!r} is not key=value")
        try:
            kwargs[key] = float(value)
        except ValueError:
            raise MedauxError(
                f"synthetic spec entry {part!r} has a non-numeric value"
            ) from None
    ints = {k: int(v) for k, v in kwargs.items() if k in ("N", "seed")}
    kwargs.update(ints)
    try:
        return SyntheticSpec(**kwargs)  # type: ignore[arg-type]
    except TypeError as exc:
        raise MedauxError(f"bad synthetic spec: {exc}") from exc


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------


def _trim(value: float, precision: int) -> str:
    s = f"{value:.{precision}f}".rstrip("0").rstrip(".")
    return "0" if s in ("", "-", "-0") else s


def cmd_params(args) -> int:
    if args.input is not None:
        if args.n is None:
            raise MedauxError("--input requires --n")
        frame = load_population(args.input)
        fy_m, fx_m = _density_methods(args)
        params = compute_params(frame, args.n, fy_m, fx_m)
    else:
        params = _load_params_arg(args.params, args.lenient)

    as_dict = params.as_dict()
    short_names = {"median_ratio": "R", "median_gap": "b"}
    if args.format == "json":
        sys.stdout.write(json.dumps(as_dict, indent=2) + "\n")
    else:
        for key, value in as_dict.items():
            label = short_names.get(key, key)
            if isinstance(value, int):
                sys.stdout.write(f"{label} = {value}\n")
            else:
                sys.stdout.write(f"{label} = {_trim(value, args.precision)}\n")
    return 0


def cmd_table(args) -> int:
    params = _load_params_arg(args.params, args.lenient)
    ids = "all" if args.estimators.strip().lower() == "all" else [
        s.strip() for s in args.estimators.split(",") if s.strip()
    ]
    rows = mse.table_rows(params, ids, delta=args.delta)
    table = RenderedTable(
        rows=tuple(
            {
                "estimator": r.estimator,
                "analytic_mse": r.analytic_mse,
                "analytic_bias": r.analytic_bias,
                "empirical_mse": None,
                "pre": r.pre_vs_sample_median,
            }
            for r in rows
        ),
        format=args.format,
    )
    sys.stdout.write(render_table(table, args.precision))
    return 0


def cmd_simulate(args) -> int:
    if args.config is not None:
        with open(args.config, encoding="utf-8") as fh:
            file_cfg = json.load(fh)
    else:
        file_cfg = {}

    def pick(flag_value, key, fallback):
        if flag_value is not None:
            return flag_value
        return file_cfg.get(key, fallback)

    n = pick(args.n, "n", None)
    reps = pick(args.reps, "reps", None)
    if n is None or reps is None:
        raise MedauxError("simulate needs --n and --reps (flags or config file)")
    estimators = pick(args.estimators, "estimators", "M_y,M_r,M_d,t_m")
    if isinstance(estimators, str):
        estimators = tuple(s.strip() for s in estimators.split(",") if s.strip())
    config = SimulationConfig(
        n=int(n),
        reps=int(reps),
        seed=int(pick(args.seed, "seed", 0)),
        estimators=tuple(estimators),
        weights=pick(args.weights, "weights", "true-params"),
    )
    jobs = args.jobs if args.jobs is not None else 1

    if args.input is not None:
        frame = load_population(args.input)
    else:
        frame = montecarlo.make_synthetic(_parse_synthetic(args.synthetic))

    density = KernelDensity() if args.density == "kernel" else HistogramDensity()
    params_n = config.n if config.n < frame.N else frame.N - 1
    params = compute_params(frame, params_n, density, density)
    report = montecarlo.run_simulation(frame, config, params, jobs=jobs)

    baseline = params.gamma * params.median_y**2 * params.cv_y**2
    rows = tuple(
        {
            "estimator": r.estimator,
            "analytic_mse": r.analytic_mse,
            "analytic_bias": r.analytic_bias,
            "empirical_mse": r.empirical_mse,
            "pre": mse.pre(r.analytic_mse, baseline) if r.analytic_mse > 0 else None,
        }
        for r in report.results
    )
    extra = {
        "config": {
            "n": config.n,
            "reps": config.reps,
            "seed": config.seed,
            "estimators": list(config.estimators),
            "weights": config.weights,
        },
        "params": report.params.as_dict(),
        "detail": [
            {
                "estimator": r.estimator,
                "reps_used": r.reps_used,
                "failures": r.failures,
                "empirical_bias": r.empirical_bias,
                "mc_se_mse": r.mc_se_mse,
                "ratio_empirical_to_analytic": r.ratio_empirical_to_analytic,
            }
            for r in report.results
        ],
    }
    table = RenderedTable(rows=rows, format=args.format, extra=extra)
    sys.stdout.write(render_table(table, args.precision))
    return 0


def cmd_compare(args) -> int:
    params = _load_params_arg(args.params, args.lenient)
    scalars = None
    if args.tmq_preset is not None:
        spec = None
        try:
            from .estimators import preset

            spec = preset(args.tmq_preset, params)
        except UnknownEstimatorError as exc:
            raise MedauxError(str(exc)) from exc
        if spec.family != "ratio_exp_shrunk":
            raise MedauxError(
                f"--tmq-preset needs a single-weight preset, got {args.tmq_preset!r}"
            )
        scalars = (spec.alpha, spec.eta, spec.lam)
    checks = mse.dominance_checks(params, tmq_scalars=scalars, delta=args.delta)
    passed = 0
    for check in checks:
        if check.satisfied is None:
            verdict = "INDETERMINATE"
        elif check.satisfied:
            verdict = "PASS"
            passed += 1
        else:
            verdict = "FAIL"
        note = f" [{check.note}]" if check.note else ""
        sys.stdout.write(
            f"{check.name}: {verdict} "
            f"(margin {_trim(check.margin, args.precision)}){note}\n"
        )
    sys.stdout.write(f"{passed}/{len(checks)} checks passed\n")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="medaux",
        description="Median estimation with an auxiliary variable under SRSWOR",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, default_precision: int) -> None:
        p.add_argument("--format", choices=FORMATS, default=_default_format())
        p.add_argument("--precision", type=int, default=default_precision)
        p.add_argument(
            "--lenient",
            action="store_true",
            help="warn instead of failing on unknown params-file keys",
        )

    p_params = sub.add_parser("params", help="extract or load population parameters")
    src = p_params.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="population CSV with columns x,y")
    src.add_argument("--params", help="params JSON file or builtin popI/popII")
    p_params.add_argument("--n", type=int, help="sample size (with --input)")
    p_params.add_argument(
        "--density", choices=("kernel", "histogram", "known"), default="kernel"
    )
    p_params.add_argument("--fy", type=float, help="known density of y at its median")
    p_params.add_argument("--fx", type=float, help="known density of x at its median")
    add_common(p_params, default_precision=5)
    p_params.set_defaults(handler=cmd_params)

    p_table = sub.add_parser("table", help="analytic minimum-MSE table")
    p_table.add_argument("--params", required=True)
    p_table.add_argument("--estimators", default="all")
    p_table.add_argument("--delta", type=float, default=1.0)
    add_common(p_table, default_precision=2)
    p_table.set_defaults(handler=cmd_table)

    p_sim = sub.add_parser("simulate", help="SRSWOR replication study")
    src = p_sim.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="population CSV with columns x,y")
    src.add_argument(
        "--synthetic",
        help="lognormal spec, e.g. N=2000,mu_x=7,sigma_x=0.5,mu_y=7,sigma_y=0.5,rho=0.8,seed=1",
    )
    p_sim.add_argument("--n", type=int)
    p_sim.add_argument("--reps", type=int)
    p_sim.add_argument("--seed", type=int)
    p_sim.add_argument("--estimators")
    p_sim.add_argument("--weights", choices=("true-params", "plug-in"))
    p_sim.add_argument("--jobs", type=int)
    p_sim.add_argument("--config", help="JSON file with SimulationConfig fields")
    p_sim.add_argument(
        "--density", choices=("kernel", "histogram"), default="kernel",
        help="density method for parameter extraction from the frame",
    )
    add_common(p_sim, default_precision=2)
    p_sim.set_defaults(handler=cmd_simulate)

    p_cmp = sub.add_parser("compare", help="dominance checks with margins")
    p_cmp.add_argument("--params", required=True)
    p_cmp.add_argument("--tmq-preset", help="single-weight preset, e.g. t_mq7")
    p_cmp.add_argument("--delta", type=float, default=1.0)
    add_common(p_cmp, default_precision=2)
    p_cmp.set_defaults(handler=cmd_compare)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.precision < 0:
        parser.error("--precision must be nonnegative")
    if args.command == "simulate" and args.reps is not None and args.reps < 1:
        parser.error("--reps must be at least 1")
    if args.command == "params" and args.params is not None and args.n is not None:
        parser.error("--n only applies to --input")
    try:
        return args.handler(args)
    except UnknownEstimatorError as exc:
        parser.error(str(exc))  # exits with code 2
        return 2  # unreachable, keeps type checkers quiet
    except MedauxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
