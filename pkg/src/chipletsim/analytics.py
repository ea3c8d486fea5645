"""Closed-form locality and roofline models, plus simulation cross-checks.

The cooperative-tiling hit-rate model: with ``W`` workers per XCD and
``m_tiles = ceil(batch / T_M)`` batch tiles, ``R = min(W, m_tiles)`` workers
process each weight tile back to back, so the expected L2 hit rate on weight
loads is ``(R - 1) / R``.  Cache reuse raises the effective arithmetic
intensity of a batched GEMV from its nominal ``AI = batch`` to
``batch / (1 - hit_rate)``, which is where the roofline crossings come from.

These functions are pure; :func:`model_vs_sim` ties them back to simulator
output by comparing the model against the weight-role hit counters.
"""

from __future__ import annotations

from dataclasses import dataclass

from .machine import MachineConfig, ModelConfig
from .memsim import AccessRole, Metrics
from .taskgraph import LINEAR_OPS, OpKind


class AnalyticsError(ValueError):
    """Invalid model inputs (out-of-range rates, non-linear ops, ...)."""


def weight_hit_model(workers: int, batch: int, t_m: int) -> float:
    """Predicted L2 hit rate for weight loads under cooperative tiling."""
    if workers < 1 or batch < 1 or t_m < 1:
        raise AnalyticsError("workers, batch, and t_m must be positive")
    m_tiles = -(-batch // t_m)
    r = min(workers, m_tiles)
    return 1.0 - 1.0 / r


def effective_ai(batch: int, l2_hit_rate: float) -> float:
    """Effective FLOP/byte after cache reuse removes HBM traffic."""
    if batch < 1:
        raise AnalyticsError("batch must be positive")
    if not 0.0 <= l2_hit_rate < 1.0:
        raise AnalyticsError("l2_hit_rate must lie in [0, 1)")
    return batch / (1.0 - l2_hit_rate)


def roofline(ai: float, machine: MachineConfig) -> float:
    """Attainable FLOP/s at arithmetic intensity ``ai``."""
    if ai < 0:
        raise AnalyticsError("arithmetic intensity must be nonnegative")
    return min(machine.peak_flops, machine.hbm_bandwidth_bytes_per_s * ai)


@dataclass(frozen=True)
class RooflinePoint:
    batch: int
    ai_nominal: float
    ai_effective: float
    attainable_flops: float


def roofline_point(machine: MachineConfig, batch: int,
                   l2_hit_rate: float) -> RooflinePoint:
    ai_eff = effective_ai(batch, l2_hit_rate)
    return RooflinePoint(
        batch=batch,
        ai_nominal=float(batch),
        ai_effective=ai_eff,
        attainable_flops=roofline(ai_eff, machine),
    )


_GEMM_DIMS = {
    OpKind.QKV_PROJ: lambda m: (m.hidden_dim, m.qkv_dim),
    OpKind.O_PROJ_RESIDUAL: lambda m: (m.hidden_dim, m.hidden_dim),
    OpKind.GATE_UP_SILU: lambda m: (m.hidden_dim, m.gate_up_dim),
    OpKind.DOWN_PROJ_RESIDUAL: lambda m: (m.ffn_dim, m.hidden_dim),
}


def linear_gemm_dims(op: OpKind, model: ModelConfig) -> tuple:
    """(K, N) of a linear op's weight matrix for this model."""
    if op not in _GEMM_DIMS:
        raise AnalyticsError(f"{op.value} is not a linear op")
    return _GEMM_DIMS[op](model)


@dataclass(frozen=True)
class WeightBudget:
    op: OpKind
    k: int
    n: int
    total_bytes: int
    per_xcd_bytes: int
    l2_window_bytes: int
    fits_l2: bool
    fits_llc: bool


def weight_budget(model: ModelConfig, machine: MachineConfig, op: OpKind,
                  tile: tuple) -> WeightBudget:
    """Weight footprint of one linear op and its active L2 window.

    The window is the streaming working set: one ``T_K x T_N`` K-chunk tile
    per worker.  ``fits_l2`` asks whether the whole per-XCD partition fits
    (it never does for production shapes; only the window has to).  Byte
    counts are exact; quoted megabyte figures use MB = 2^20 bytes.
    """
    if op not in LINEAR_OPS:
        raise AnalyticsError(f"{op.value} is not a linear op")
    k, n = _GEMM_DIMS[op](model)
    _, t_n, t_k = tile
    total = k * n * model.dtype_bytes
    per_xcd = total // machine.num_xcds
    window = machine.workers_per_xcd * t_k * t_n * model.dtype_bytes
    return WeightBudget(
        op=op,
        k=k,
        n=n,
        total_bytes=total,
        per_xcd_bytes=per_xcd,
        l2_window_bytes=window,
        # strict: a partition equal to capacity leaves no room for
        # activations or runtime state, so it does not usefully fit
        fits_l2=per_xcd < machine.l2_capacity_bytes,
        fits_llc=total <= machine.llc_capacity_bytes,
    )


def layer_weight_budgets(model: ModelConfig, machine: MachineConfig,
                         tile: tuple) -> dict:
    """Per-op budgets plus the whole-layer totals under ``"all"``."""
    budgets = {
        op: weight_budget(model, machine, op, tile) for op in LINEAR_OPS
    }
    total = sum(b.total_bytes for b in budgets.values())
    per_xcd = sum(b.per_xcd_bytes for b in budgets.values())
    budgets["all"] = WeightBudget(
        op=OpKind.QKV_PROJ,  # placeholder; the aggregate spans all four
        k=0,
        n=0,
        total_bytes=total,
        per_xcd_bytes=per_xcd,
        l2_window_bytes=0,
        fits_l2=per_xcd <= machine.l2_capacity_bytes,
        fits_llc=total <= machine.llc_capacity_bytes,
    )
    return budgets


@dataclass(frozen=True)
class DeviationRecord:
    simulated: float
    predicted: float
    deviation: float
    tolerance: float
    passed: bool


def model_vs_sim(metrics: Metrics, prediction: float,
                 tolerance: float) -> DeviationRecord:
    """Compare a simulated weight-load hit rate against the model.

    ``metrics`` must contain weight-role counters (the simulator tags every
    access); a run with no weight loads cannot be checked.
    """
    total = (
        metrics.l2_hits_by_role[AccessRole.WEIGHT]
        + metrics.l2_misses_by_role[AccessRole.WEIGHT]
    )
    if total == 0:
        raise AnalyticsError("metrics carry no weight-role access counters")
    simulated = metrics.weight_l2_hit_rate
    deviation = abs(simulated - prediction)
    return DeviationRecord(
        simulated=simulated,
        predicted=prediction,
        deviation=deviation,
        tolerance=tolerance,
        passed=deviation <= tolerance,
    )


def comparison_table(rows, baseline_mode: str = "standard") -> str:
    """Plain-text table of per-mode cache and traffic results.

    ``rows`` is an iterable of ``(batch, {mode: SimTrace})``.  HBM read and
    write columns are normalized to ``baseline_mode`` at each batch size.
    """
    rows = list(rows)
    if not rows:
        return "(no results)\n"
    modes = list(rows[0][1])
    header = ["BS"]
    header += [f"L2Hit% {m}" for m in modes]
    header += [f"HBMRd x{baseline_mode} {m}" for m in modes
               if m != baseline_mode]
    header += [f"HBMWr x{baseline_mode} {m}" for m in modes
               if m != baseline_mode]
    lines = ["  ".join(f"{h:>22}" for h in header)]
    for batch, by_mode in rows:
        base = by_mode.get(baseline_mode)
        cells = [f"{batch:>22}"]
        for m in modes:
            cells.append(f"{by_mode[m].metrics.l2_hit_rate * 100:>21.1f}%")
        for kind in ("hbm_read_bytes", "hbm_write_bytes"):
            for m in modes:
                if m == baseline_mode:
                    continue
                val = getattr(by_mode[m].metrics, kind)
                ref = getattr(base.metrics, kind) if base else 0
                ratio = val / ref if ref else float("nan")
                cells.append(f"{ratio:>22.2f}")
        lines.append("  ".join(cells))
    return "\n".join(lines) + "\n"


def comparison_json(rows, baseline_mode: str = "standard") -> dict:
    """JSON form of :func:`comparison_table`."""
    out = {"schema_version": 1, "baseline_mode": baseline_mode, "rows": []}
    for batch, by_mode in rows:
        base = by_mode.get(baseline_mode)
        entry = {"batch": batch, "modes": {}}
        for m, trace in by_mode.items():
            met = trace.metrics
            rec = {
                "l2_hit_rate": met.l2_hit_rate,
                "weight_l2_hit_rate": met.weight_l2_hit_rate,
                "hbm_read_bytes": met.hbm_read_bytes,
                "hbm_write_bytes": met.hbm_write_bytes,
                "est_time_s": trace.estimated_time_s,
            }
            if base is not None and m != baseline_mode:
                bm = base.metrics
                rec["hbm_read_vs_baseline"] = (
                    met.hbm_read_bytes / bm.hbm_read_bytes
                    if bm.hbm_read_bytes else None
                )
                rec["hbm_write_vs_baseline"] = (
                    met.hbm_write_bytes / bm.hbm_write_bytes
                    if bm.hbm_write_bytes else None
                )
            entry["modes"][m] = rec
        out["rows"].append(entry)
    return out
