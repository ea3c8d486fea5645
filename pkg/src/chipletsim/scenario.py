"""Scenario runner: configs x modes x batches to metrics files.

A scenario names a machine and model (preset or JSON file), the scheduling
modes to compare, and the batch sizes to sweep.  Every point builds its task
graph, simulates it on a fresh memory hierarchy, and contributes one metrics
row; rows land in the output file in scenario order regardless of how many
worker processes ran them.  A plain-text summary normalized to the
``standard`` mode sits next to the metrics file.

There is no randomness anywhere in the pipeline, so no seed exists: two runs
of the same scenario produce byte-identical outputs.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .analytics import comparison_json, comparison_table, linear_gemm_dims
from .machine import resolve_machine, resolve_model
from .memsim import MemHierarchy
from .runtime import CSV_COLUMNS, make_trace_sink, simulate
from .taskgraph import (
    STANDARD_TILE_PROFILE,
    LINEAR_OPS,
    OpKind,
    build_decoder_layer,
    validate_graph,
)
from .traversal import Distribution, Traversal

METRICS_SCHEMA = "chipletsim.metrics.v1"

# mode name -> (graph mode, traversal, distribution)
MODES = {
    "standard": ("standard", Traversal.M_MAJOR_WINDOWED, Distribution.M_TILE),
    "chiplet_m_tile": (
        "chiplet", Traversal.M_MAJOR_WINDOWED, Distribution.M_TILE,
    ),
    "chiplet_m_split": (
        "chiplet", Traversal.M_MAJOR_WINDOWED, Distribution.M_SPLIT,
    ),
    "chiplet_n_major": ("chiplet", Traversal.N_MAJOR, Distribution.M_TILE),
}


class ScenarioError(ValueError):
    """Scenario arguments are inconsistent."""


@dataclass(frozen=True)
class Scenario:
    machine: str
    model: str
    modes: tuple = ("standard", "chiplet_m_tile")
    batches: tuple = (1,)
    layers: int = 1
    out: str = "metrics.csv"
    format: str = "csv"
    trace: bool = False
    jobs: int = 1

    def __post_init__(self):
        if not self.batches:
            raise ScenarioError("batches must be nonempty")
        if any(b < 1 for b in self.batches):
            raise ScenarioError("batch sizes must be positive")
        if self.layers < 1:
            raise ScenarioError("layers must be at least 1")
        if self.format not in ("csv", "json"):
            raise ScenarioError(f"unknown output format {self.format!r}")
        unknown = [m for m in self.modes if m not in MODES]
        if unknown:
            raise ScenarioError(
                f"unknown modes {unknown}; known: {sorted(MODES)}"
            )
        if self.jobs < 1:
            raise ScenarioError("jobs must be at least 1")


def fit_tiles(model, machine, graph_mode):
    """Shrink default tile widths until they divide this model's GEMMs.

    Keeps the stock profiles on shapes they already divide (all production
    shapes); smaller models step T_N and T_K down by powers of two.
    """
    overrides = {}
    for op in LINEAR_OPS:
        k, n = linear_gemm_dims(op, model)
        width = n if graph_mode == "standard" else n // machine.num_xcds
        if op is OpKind.GATE_UP_SILU and graph_mode == "chiplet":
            width //= 2  # fused halves: tiles must divide each half
        t_m, t_n, t_k = (
            STANDARD_TILE_PROFILE[op] if graph_mode == "standard" else (16, 64, 256)
        )
        while width % t_n:
            t_n //= 2
        while k % t_k:
            t_k //= 2
        overrides[op] = (t_m, t_n, t_k)
    overrides["silu_chunk"] = min(
        STANDARD_TILE_PROFILE["silu_chunk"], model.ffn_dim
    )
    return overrides


def scenario_id(sc: Scenario, mode: str, batch: int) -> str:
    tag = f"{Path(sc.machine).stem}-{Path(sc.model).stem}-{mode}-bs{batch}"
    if sc.layers != 1:
        tag += f"-l{sc.layers}"
    return tag


def run_point(machine_spec: str, model_spec: str, mode: str, batch: int,
              layers: int, trace_path: str | None = None):
    """Simulate one scenario point; returns its trace."""
    machine = resolve_machine(machine_spec)
    model = resolve_model(model_spec)
    graph_mode, traversal, distribution = MODES[mode]
    tiles = fit_tiles(model, machine, graph_mode)
    graph = build_decoder_layer(model, machine, graph_mode, batch,
                                tile_overrides=tiles, layers=layers)
    validate_graph(graph)
    h = MemHierarchy(machine)
    if trace_path:
        with open(trace_path, "w") as f:
            h.trace_sink = make_trace_sink(f)
            trace = simulate(graph, machine, h, traversal=traversal,
                             distribution=distribution, keep_event_log=False)
            h.trace_sink = None
        return trace
    return simulate(graph, machine, h, traversal=traversal,
                    distribution=distribution, keep_event_log=False)


@dataclass
class ScenarioResult:
    rows: list = field(default_factory=list)  # (scenario_id, mode, batch, trace)
    metrics_path: str = ""
    summary_path: str = ""
    trace_paths: list = field(default_factory=list)


def _trace_path(sc: Scenario, sid: str) -> str:
    out = Path(sc.out)
    return str(out.with_name(f"{out.stem}.{sid}.trace.jsonl"))


def run_scenario(sc: Scenario) -> ScenarioResult:
    """Run every (batch, mode) point and write metrics plus a summary."""
    points = [
        (mode, batch) for batch in sc.batches for mode in sc.modes
    ]
    result = ScenarioResult(metrics_path=sc.out)

    jobs = []
    for mode, batch in points:
        sid = scenario_id(sc, mode, batch)
        tpath = _trace_path(sc, sid) if sc.trace else None
        jobs.append((sid, mode, batch, tpath))
        if tpath:
            result.trace_paths.append(tpath)

    if sc.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=sc.jobs) as pool:
            futures = [
                pool.submit(run_point, sc.machine, sc.model, mode, batch,
                            sc.layers, tpath)
                for _, mode, batch, tpath in jobs
            ]
            traces = [f.result() for f in futures]
    else:
        traces = [
            run_point(sc.machine, sc.model, mode, batch, sc.layers, tpath)
            for _, mode, batch, tpath in jobs
        ]

    for (sid, mode, batch, _), trace in zip(jobs, traces):
        result.rows.append((sid, mode, batch, trace))

    out = Path(sc.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    if sc.format == "csv":
        lines = [f"# schema={METRICS_SCHEMA}", ",".join(CSV_COLUMNS)]
        lines += [t.csv_row(sid) for sid, _, _, t in result.rows]
        out.write_text("\n".join(lines) + "\n")
    else:
        doc = {
            "schema_version": 1,
            "schema": METRICS_SCHEMA,
            "rows": [
                {"scenario_id": sid, **t.to_json()}
                for sid, _, _, t in result.rows
            ],
        }
        out.write_text(json.dumps(doc, indent=2) + "\n")

    by_batch = []
    for batch in sc.batches:
        per_mode = {
            mode: trace
            for _, mode, b, trace in result.rows
            if b == batch
        }
        by_batch.append((batch, per_mode))
    baseline = "standard" if "standard" in sc.modes else sc.modes[0]
    summary = comparison_table(by_batch, baseline_mode=baseline)
    summary_path = out.with_name(out.stem + ".summary.txt")
    summary_path.write_text(summary)
    result.summary_path = str(summary_path)
    return result


def summary_from_rows(rows, baseline_mode="standard"):
    """Rebuild the (batch -> mode -> trace) table inputs from result rows."""
    batches = []
    for _, _, batch, _ in rows:
        if batch not in batches:
            batches.append(batch)
    table = []
    for b in batches:
        table.append(
            (b, {mode: t for _, mode, bb, t in rows if bb == b})
        )
    return comparison_json(table, baseline_mode)
