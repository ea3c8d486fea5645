"""Command-line entry point: ``run``, ``validate``, and ``report``.

Exit codes: 0 on success, 2 for configuration errors, 3 when a simulation
deadlocks.
"""

from __future__ import annotations

import argparse
import json
import sys

from .analytics import linear_gemm_dims
from .machine import ConfigError, resolve_machine, resolve_model
from .runtime import DeadlockError
from .scenario import MODES, Scenario, ScenarioError, run_scenario
from .taskgraph import GraphError, LINEAR_OPS
from .traversal import ScheduleError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DEADLOCK = 3

_CONFIG_ERRORS = (ConfigError, GraphError, ScheduleError, ScenarioError,
                  ValueError, OSError)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="chipletsim",
        description="Trace-driven chiplet GPU megakernel simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate a scenario sweep")
    run.add_argument("--machine", required=True,
                     help="machine preset name or JSON file")
    run.add_argument("--model", required=True,
                     help="model preset name or JSON file")
    run.add_argument("--mode", action="append", dest="modes",
                     choices=sorted(MODES), required=True,
                     help="scheduling mode (repeatable)")
    run.add_argument("--batch", action="append", dest="batches", type=int,
                     required=True, help="batch size (repeatable)")
    run.add_argument("--layers", type=int, default=1,
                     help="decoder layers to simulate (default 1)")
    run.add_argument("--out", required=True, help="metrics output path")
    run.add_argument("--format", choices=("csv", "json"), default="csv")
    run.add_argument("--trace", action="store_true",
                     help="write per-access JSONL traces (large)")
    run.add_argument("--jobs", type=int, default=1,
                     help="parallel scenario points (default 1)")

    val = sub.add_parser("validate",
                         help="validate configs and print derived quantities")
    val.add_argument("--machine", required=True)
    val.add_argument("--model", default=None)
    val.add_argument("--batch", action="append", dest="batches", type=int,
                     default=None)

    rep = sub.add_parser("report",
                         help="re-render a summary from a JSON metrics file")
    rep.add_argument("--metrics", required=True,
                     help="metrics file written by `run --format json`")
    rep.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def _cmd_run(args) -> int:
    sc = Scenario(
        machine=args.machine,
        model=args.model,
        modes=tuple(args.modes),
        batches=tuple(args.batches),
        layers=args.layers,
        out=args.out,
        format=args.format,
        trace=args.trace,
        jobs=args.jobs,
    )
    result = run_scenario(sc)
    print(f"wrote {len(result.rows)} metrics rows to {result.metrics_path}")
    print(f"summary: {result.summary_path}")
    for p in result.trace_paths:
        print(f"trace: {p}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    machine = resolve_machine(args.machine)
    print(f"machine ok: {machine.num_xcds} XCDs x {machine.cus_per_xcd} CUs,"
          f" {machine.workers_per_xcd} workers/XCD")
    print(f"  ridge point: {machine.ridge_point:.1f} FLOP/byte")
    if args.model is None:
        return EXIT_OK
    model = resolve_model(args.model)
    print(f"model ok: hidden={model.hidden_dim} ffn={model.ffn_dim} "
          f"heads={model.q_heads}/{model.kv_heads}")
    print("  per-XCD weight bytes:")
    for op in LINEAR_OPS:
        k, n = linear_gemm_dims(op, model)
        per_xcd = k * n * model.dtype_bytes // machine.num_xcds
        print(f"    {op.value:>20}: {per_xcd / 2**20:.2f} MiB")
    batches = args.batches or [1, 32, 64]
    t_m = 16
    tiles = ", ".join(f"bs={b}: {-(-b // t_m)}" for b in batches)
    print(f"  m_tiles (T_M={t_m}): {tiles}")
    return EXIT_OK


def _cmd_report(args) -> int:
    with open(args.metrics) as f:
        doc = json.load(f)
    rows = doc.get("rows", [])
    if args.format == "json":
        print(json.dumps(doc, indent=2))
        return EXIT_OK
    header = f"{'scenario':>40} {'L2Hit%':>8} {'wHit%':>8} " \
             f"{'HBM rd':>14} {'HBM wr':>14} {'est s':>12}"
    print(header)
    for r in rows:
        print(
            f"{r['scenario_id']:>40} "
            f"{100 * r['l2_hit_rate']:>7.1f}% "
            f"{100 * r['weight_l2_hit_rate']:>7.1f}% "
            f"{r['hbm_read_bytes']:>14} "
            f"{r['hbm_write_bytes']:>14} "
            f"{r['estimated_time_s']:>12.3e}"
        )
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "validate":
            return _cmd_validate(args)
        return _cmd_report(args)
    except DeadlockError as exc:
        print(f"error: simulation deadlock: {exc}", file=sys.stderr)
        return EXIT_DEADLOCK
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
