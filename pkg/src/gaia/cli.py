"""Command-line interface.

Subcommands cover the whole pipeline: generate a dataset, inspect a
query plan, run a single query, run the benchmark matrix, and turn
results into the evaluation report with figures.

Data goes to stdout, diagnostics and progress go to stderr.  Exit
codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import analysis, figures
from .bench import (
    DEFAULT_DSS_LIST,
    DEFAULT_QPS_LIST,
    BenchMatrixSpec,
    read_records,
    run_matrix,
)
from .engine import ModelKind, query
from .errors import GaiaError
from .geometry import SpanMode, parse_shape
from .grid import DEFAULT_GRID, GridConfig, read_grid_config
from .segments import format_plan, plan
from .store import Store, read_entities, write_entities
from .workload import generate_entities


class _UsageError(Exception):
    """Bad command-line input discovered after argparse (exit code 2)."""


def _load_grid(args: argparse.Namespace) -> GridConfig:
    if args.grid:
        return read_grid_config(args.grid)
    return DEFAULT_GRID


def _parse_mode(text: str) -> SpanMode:
    try:
        return SpanMode(text)
    except ValueError:
        raise _UsageError(f"unknown span mode {text!r} (expected tight or bounding)") from None


def _parse_models(text: str) -> tuple[ModelKind, ...]:
    models = []
    for name in text.split(","):
        try:
            models.append(ModelKind(name.strip().lower()))
        except ValueError:
            raise _UsageError(
                f"unknown model {name.strip()!r} (expected raw, projection, grid, gaia)"
            ) from None
    return tuple(models)


def _parse_int_list(text: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise _UsageError(f"{flag} expects comma-separated integers, got {text!r}") from None


def _parse_shape_arg(text: str):
    try:
        return parse_shape(text)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def cmd_generate(args: argparse.Namespace) -> int:
    cfg = _load_grid(args)
    entities = generate_entities(cfg, args.dss, args.seed)
    write_entities(entities, args.out)
    print(f"wrote {len(entities)} entities to {args.out}", file=sys.stderr)
    return 0


def cmd_plan(args: argparse.Namespace) -> int:
    cfg = _load_grid(args)
    shape = _parse_shape_arg(args.shape)
    p = plan(shape, cfg, _parse_mode(args.mode))
    print(format_plan(p))
    return 0


def cmd_query(args: argparse.Namespace) -> int:
    cfg = _load_grid(args)
    shape = _parse_shape_arg(args.shape)
    try:
        model = ModelKind(args.model.lower())
    except ValueError:
        raise _UsageError(
            f"unknown model {args.model!r} (expected raw, projection, grid, gaia)"
        ) from None
    store = Store.build(read_entities(args.data), cfg)
    result = query(
        store,
        shape,
        model,
        mode=_parse_mode(args.mode),
        exact=not args.no_exact,
        fan_out=args.fan_out,
    )
    print(f"count {len(result.entities)}")
    print("ids " + " ".join(str(i) for i in result.ids))
    print(f"queries_issued {result.counters.queries_issued}")
    print(f"entries_scanned {result.counters.entries_scanned}")
    print(f"elapsed_seconds {result.elapsed_seconds!r}")
    print(f"exact {'true' if result.exact else 'false'}")
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    cfg = _load_grid(args)
    if args.dss_list:
        dss_list = _parse_int_list(args.dss_list, "--dss-list")
    else:
        dss_list = tuple(d for d in DEFAULT_DSS_LIST if args.dss_max is None or d <= args.dss_max)
    if args.qps_list:
        qps_list = _parse_int_list(args.qps_list, "--qps-list")
    else:
        qps_list = tuple(q for q in DEFAULT_QPS_LIST if args.qps_max is None or q <= args.qps_max)
    if not dss_list or not qps_list:
        raise _UsageError("the dss/qps caps leave an empty matrix")
    mspec = BenchMatrixSpec(
        models=_parse_models(args.models),
        dss_list=dss_list,
        qps_list=qps_list,
        trials=args.trials,
        seed=args.seed,
        radius_range=(args.radius_min, args.radius_max),
        mode=_parse_mode(args.mode),
        exact=not args.no_exact,
        fan_out=args.fan_out,
        counters_only=args.counters_only,
    )
    records = run_matrix(mspec, cfg, args.out, log=lambda line: print(line, file=sys.stderr))
    failed = sum(1 for r in records if r.failed)
    print(f"wrote {len(records)} records to {args.out} ({failed} failed cells)", file=sys.stderr)
    return 0 if failed == 0 else 1


def cmd_report(args: argparse.Namespace) -> int:
    records = []
    if args.results:
        records.extend(read_records(args.results))
    for spec in args.table or []:
        name, sep, path = spec.partition("=")
        if not sep:
            raise _UsageError(f"--table expects model=path, got {spec!r}")
        try:
            model = ModelKind(name.strip().lower())
        except ValueError:
            raise _UsageError(f"unknown model {name!r} in --table") from None
        records.extend(analysis.read_table_csv(path, model))
    if not records:
        raise _UsageError("no input: pass --results and/or --table")
    os.makedirs(args.out_dir, exist_ok=True)
    report = analysis.build_report(records, sqe_qps=args.sqe_qps, cqe_ratio=args.cqe_ratio)
    csv_path = os.path.join(args.out_dir, "report.csv")
    analysis.write_report_csv(report, csv_path)
    text = analysis.format_report_text(report)
    with open(os.path.join(args.out_dir, "report.txt"), "w", encoding="utf-8") as fh:
        fh.write(text + "\n")
    analysis.write_plot_data(records, report, args.out_dir, sqe_qps=args.sqe_qps)
    if not args.no_figures:
        paths = figures.render_all(
            records, report, args.out_dir, sqe_qps=args.sqe_qps, cqe_ratio=args.cqe_ratio
        )
        print(f"rendered {len(paths)} figures under {args.out_dir}", file=sys.stderr)
    print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaia",
        description="Cell-linearized geospatial storage: data generation, "
        "query planning, benchmarking, and evaluation reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", help="grid config file (key = value); default: 100x100 world, cell side 10")

    p = sub.add_parser("generate", parents=[common], help="generate a seeded dataset CSV")
    p.add_argument("--dss", type=int, required=True, help="dataset size (entity count)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("plan", parents=[common], help="print a shape's per-row segment plan")
    p.add_argument("--shape", required=True, help="disc:px,py,R | rect:x1,y1,x2,y2 | poly:x1,y1;x2,y2;...")
    p.add_argument("--mode", default="tight", help="span mode: tight or bounding")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("query", parents=[common], help="run one query against a dataset CSV")
    p.add_argument("--data", required=True, help="entity CSV from generate")
    p.add_argument("--shape", required=True, help="shape literal, as for plan")
    p.add_argument("--model", required=True, help="raw | projection | grid | gaia")
    p.add_argument("--mode", default="tight", help="span mode for gaia: tight or bounding")
    p.add_argument("--no-exact", action="store_true", help="skip the containment filter (gaia/grid)")
    p.add_argument("--fan-out", type=int, default=None, help="max concurrent segment scans")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("bench", parents=[common], help="run the benchmark matrix to CSV")
    p.add_argument("--out", required=True, help="output results CSV path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--models", default="raw,projection,grid,gaia")
    p.add_argument("--dss-list", help="comma-separated dataset sizes (overrides --dss-max)")
    p.add_argument("--dss-max", type=int, help="trim the default size ladder at this dss")
    p.add_argument("--qps-list", help="comma-separated concurrency levels (overrides --qps-max)")
    p.add_argument("--qps-max", type=int, help="trim the default concurrency ladder at this qps")
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--radius-min", type=float, default=1.0)
    p.add_argument("--radius-max", type=float, default=5.0)
    p.add_argument("--mode", default="tight")
    p.add_argument("--no-exact", action="store_true")
    p.add_argument("--fan-out", type=int, default=None)
    p.add_argument("--counters-only", action="store_true", help="skip timing; record only work counters")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("report", parents=[common], help="build the evaluation report from results")
    p.add_argument("--results", help="benchmark results CSV (from bench)")
    p.add_argument("--table", action="append", help="model=path of a latency table CSV; repeatable")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--sqe-qps", type=int, default=1, help="qps column used for SQE and PUE")
    p.add_argument("--cqe-ratio", type=int, default=10, help="diagonal is dss = ratio * qps")
    p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except GaiaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
