"""Deterministic simulation of the persistent-kernel runtime.

One scheduler per XCD owns a ready queue and per-worker queues.  CU- and
wavefront-level tasks go to a single worker (round-robin) and signal their
event directly with one GPU-scope atomic on completion.  Chiplet-level tasks
broadcast to every worker on their bound XCD; the workers execute the
partition's access stream cooperatively, count sub-task completions in an
XCD-local counter (plain L2 stores, no fence), and only the last completion
on the XCD pays for cross-chiplet visibility: one L2 writeback fence plus one
GPU-scope atomic.  Schedulers discover fired events by polling the global
event table once per simulation step.

Time is logical: every worker advances one K-chunk-sized unit of work per
step.  Wall-clock estimates come from an analytic roofline over the
simulated HBM traffic (`max(bytes/bandwidth, flops/peak)` per operator
stage) plus an optional per-dispatch overhead; synchronization traffic is
tracked separately and excluded from the time model.

Everything is ordered (XCD index, worker index, task order), so two runs of
the same inputs produce identical traces byte for byte.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass

from .machine import MachineConfig
from .memsim import AccessModifier, AccessRole, MemHierarchy, Metrics
from .taskgraph import (
    ElementwiseWork,
    GemmTileWork,
    GemmWork,
    OpaqueWork,
    TaskGraph,
    TaskLevel,
)
from .traversal import (
    Access,
    Distribution,
    TileSchedule,
    Traversal,
    line_span,
    lower_to_accesses,
    schedule,
)

# Synchronization structures live far above any data buffer the graph
# builder allocates: global event counters, per-XCD local counters, and
# per-worker task queues.
GLOBAL_EVENT_BASE = 1 << 40
LOCAL_COUNTER_BASE = 1 << 41
QUEUE_BASE = 1 << 42

SCHEMA_VERSION = 1

CSV_COLUMNS = (
    "scenario_id",
    "mode",
    "batch",
    "l2_hit_rate",
    "hbm_read_bytes",
    "hbm_write_bytes",
    "fences",
    "global_atomics",
    "local_atomics",
    "dispatches",
    "est_time_s",
)

_DATA_ROLES = (AccessRole.WEIGHT, AccessRole.ACTIVATION, AccessRole.OUTPUT)


class DeadlockError(RuntimeError):
    """No runnable task remains while events are still unfired."""


class CompareError(ValueError):
    """Traces are not comparable (different model/batch/machine)."""


@dataclass(frozen=True)
class StageCost:
    name: str
    layer: int
    flops: int
    hbm_bytes: int


@dataclass(frozen=True)
class SimTrace:
    """Result of one simulation run."""

    mode: str
    batch: int
    traversal: str
    distribution: str
    machine: MachineConfig
    model_fingerprint: tuple | None
    steps: int
    metrics: Metrics
    fences_issued: int
    fence_flush_lines: int
    global_atomics: int
    local_atomics: int
    poll_count: int
    dispatches: int
    stage_costs: tuple
    estimated_time_s: float
    event_log: tuple
    policy_notes: tuple

    def to_json(self) -> dict:
        m = self.metrics
        return {
            "schema_version": SCHEMA_VERSION,
            "mode": self.mode,
            "batch": self.batch,
            "traversal": self.traversal,
            "distribution": self.distribution,
            "steps": self.steps,
            "l2_hit_rate": m.l2_hit_rate,
            "weight_l2_hit_rate": m.weight_l2_hit_rate,
            "l2_hits": list(m.l2_hits),
            "l2_misses": list(m.l2_misses),
            "llc_hits": list(m.llc_hits),
            "llc_misses": list(m.llc_misses),
            "hbm_read_bytes": m.hbm_read_bytes,
            "hbm_write_bytes": m.hbm_write_bytes,
            "hbm_read_bytes_by_role": {
                AccessRole(i).name.lower(): v
                for i, v in enumerate(m.hbm_read_bytes_by_role)
            },
            "hbm_write_bytes_by_role": {
                AccessRole(i).name.lower(): v
                for i, v in enumerate(m.hbm_write_bytes_by_role)
            },
            "fences": self.fences_issued,
            "fence_flush_lines": self.fence_flush_lines,
            "global_atomics": self.global_atomics,
            "local_atomics": self.local_atomics,
            "polls": self.poll_count,
            "dispatches": self.dispatches,
            "stages": [
                {"name": s.name, "layer": s.layer, "flops": s.flops,
                 "hbm_bytes": s.hbm_bytes}
                for s in self.stage_costs
            ],
            "estimated_time_s": self.estimated_time_s,
            "policy": list(self.policy_notes),
        }

    def csv_row(self, scenario_id: str) -> str:
        m = self.metrics
        return ",".join(
            (
                scenario_id,
                self.mode,
                str(self.batch),
                f"{m.l2_hit_rate:.6f}",
                str(m.hbm_read_bytes),
                str(m.hbm_write_bytes),
                str(self.fences_issued),
                str(self.global_atomics),
                str(self.local_atomics),
                str(self.dispatches),
                f"{self.estimated_time_s:.9e}",
            )
        )


def _elementwise_unit(work: ElementwiseWork, line: int):
    unit = [
        Access(a, "load", AccessModifier.DEFAULT, AccessRole.ACTIVATION, 0)
        for base, nbytes in work.reads
        for a in line_span(base, nbytes, line)
    ]
    unit += [
        Access(a, "store", AccessModifier.NON_TEMPORAL, AccessRole.OUTPUT, 0)
        for base, nbytes in work.writes
        for a in line_span(base, nbytes, line)
    ]
    return unit


def _extra_read_unit(extra, line):
    return [
        Access(a, "load", AccessModifier.DEFAULT, AccessRole.ACTIVATION, 0)
        for base, nbytes in extra
        for a in line_span(base, nbytes, line)
    ]


def _task_units(task, machine, traversal, distribution, window):
    """Iterator over the task's per-step access lists."""
    line = machine.l2_line_bytes
    work = task.work
    if isinstance(work, GemmWork):
        sched = schedule(
            work.partition,
            machine.workers_per_xcd,
            traversal,
            distribution,
            xcd=task.xcd_binding or 0,
            num_xcds=machine.num_xcds,
            window=window,
        )
        steps = iter(lower_to_accesses(sched, work.partition, line))
        if work.extra_read_bytes:
            return itertools.chain(
                [_extra_read_unit(work.extra_read_bytes, line)], steps
            )
        return steps
    if isinstance(work, GemmTileWork):
        single = TileSchedule(
            worker_tiles=(((work.m_idx, work.n_idx),),),
            slots=(((work.m_idx, work.n_idx, 0),),),
            traversal=traversal,
            distribution=Distribution.M_TILE,
            workers=1,
        )
        steps = iter(lower_to_accesses(single, work.partition, line))
        if work.extra_read_bytes:
            return itertools.chain(
                [_extra_read_unit(work.extra_read_bytes, line)], steps
            )
        return steps
    if isinstance(work, ElementwiseWork):
        return iter([_elementwise_unit(work, line)])
    if isinstance(work, OpaqueWork):
        return iter([[]])
    raise TypeError(f"unknown work payload {type(work).__name__}")


class _ChipletExec:
    __slots__ = ("task", "units")

    def __init__(self, task, units):
        self.task = task
        self.units = units


class _WorkerExec:
    __slots__ = ("task", "units")

    def __init__(self, task, units):
        self.task = task
        self.units = units


def simulate(
    g: TaskGraph,
    machine: MachineConfig,
    h: MemHierarchy | None = None,
    *,
    traversal: Traversal = Traversal.M_MAJOR_WINDOWED,
    distribution: Distribution = Distribution.M_TILE,
    window: int = 1,
    dispatch_overhead_s: float = 0.0,
    fence_seconds_per_line: float = 0.0,
    keep_event_log: bool = True,
) -> SimTrace:
    """Run the task graph to completion and return its trace.

    ``h`` defaults to a fresh hierarchy sized from ``machine``.  Pass a
    hierarchy with a ``trace_sink`` attached to stream per-access records.
    ``fence_seconds_per_line`` charges each writeback fence in proportion
    to the dirty lines it flushed (default: fences are free in the time
    model, counted only).
    """
    if h is None:
        h = MemHierarchy(machine)
    line = machine.l2_line_bytes
    num_xcds = machine.num_xcds
    workers_per_xcd = machine.workers_per_xcd

    event_ids = list(g.events)
    event_index = {eid: i for i, eid in enumerate(event_ids)}
    required = {eid: ev.required_count for eid, ev in g.events.items()}
    g_count = {eid: 0 for eid in event_ids}
    fired = {eid for eid, ev in g.events.items() if ev.required_count == 0}

    # tasks blocked on each event, in graph order
    blocked: dict[str, list] = {eid: [] for eid in event_ids}
    remaining_waits = {}
    ready_now = []
    for t in g.tasks:
        waits = [e for e in t.wait_events if e not in fired]
        remaining_waits[t.id] = len(waits)
        if not waits:
            ready_now.append(t)
        else:
            for e in waits:
                blocked[e].append(t)

    ready: list[deque] = [deque() for _ in range(num_xcds)]
    rr_xcd = 0

    def enqueue(task):
        nonlocal rr_xcd
        if task.level is TaskLevel.CHIPLET:
            ready[task.xcd_binding].append(task)
        else:
            ready[rr_xcd % num_xcds].append(task)
            rr_xcd += 1

    for t in ready_now:
        enqueue(t)

    chiplet_exec: list[_ChipletExec | None] = [None] * num_xcds
    worker_exec = [[None] * workers_per_xcd for _ in range(num_xcds)]
    busy_workers = [0] * num_xcds
    rr_worker = [0] * num_xcds
    local_counts = [dict() for _ in range(num_xcds)]

    fences_issued = 0
    fence_flush_lines = 0
    global_atomics = 0
    local_atomics = 0
    poll_count = 0
    dispatches = 0
    completed = 0
    total_tasks = len(g.tasks)
    log: list = []
    pending_fired: list[str] = []

    stage_fire_bytes: dict[str, int] = {}

    def data_bytes_now():
        return sum(
            h._hbm_read_by_role[r] + h._hbm_write_by_role[r]
            for r in _DATA_ROLES
        )

    def global_atomic(eid, xcd, worker, step):
        nonlocal global_atomics
        global_atomics += 1
        addr = GLOBAL_EVENT_BASE + event_index[eid] * line
        h.access(xcd, addr, "load", AccessModifier.NON_TEMPORAL,
                 AccessRole.SYNC, worker, step)
        h.access(xcd, addr, "store", AccessModifier.NON_TEMPORAL,
                 AccessRole.SYNC, worker, step)
        g_count[eid] += 1
        if g_count[eid] >= required[eid] and eid not in fired:
            pending_fired.append(eid)

    step = 0
    while completed < total_tasks:
        # 1. schedulers poll the global event table and release downstream
        #    tasks of events that fired since the last step
        if len(fired) < len(event_ids):
            lowest = min(
                event_index[e] for e in event_ids if e not in fired
            )
            poll_addr = GLOBAL_EVENT_BASE + lowest * line
            for x in range(num_xcds):
                poll_count += 1
                h.access(x, poll_addr, "load", AccessModifier.NON_TEMPORAL,
                         AccessRole.SYNC, -1, step)
        for eid in pending_fired:
            fired.add(eid)
            stage_fire_bytes[eid] = data_bytes_now()
            if keep_event_log:
                log.append((step, "events", "fire", eid))
            for t in blocked[eid]:
                remaining_waits[t.id] -= 1
                if remaining_waits[t.id] == 0:
                    enqueue(t)
        pending_fired = []

        # 2. dispatch: each scheduler hands ready tasks to its workers
        for x in range(num_xcds):
            q = ready[x]
            while q:
                task = q[0]
                if task.level is TaskLevel.CHIPLET:
                    if chiplet_exec[x] is not None or busy_workers[x]:
                        break
                    q.popleft()
                    units = _task_units(task, machine, traversal,
                                        distribution, window)
                    chiplet_exec[x] = _ChipletExec(task, units)
                    dispatches += 1
                    # broadcast: one queue write per worker, read back by it
                    for w in range(workers_per_xcd):
                        qaddr = QUEUE_BASE + (x * workers_per_xcd + w) * line
                        h.access(x, qaddr, "store", AccessModifier.DEFAULT,
                                 AccessRole.SYNC, w, step)
                        h.access(x, qaddr, "load", AccessModifier.DEFAULT,
                                 AccessRole.SYNC, w, step)
                    if keep_event_log:
                        log.append((step, f"sched.x{x}", "dispatch", task.id))
                else:
                    if chiplet_exec[x] is not None or \
                            busy_workers[x] == workers_per_xcd:
                        break
                    q.popleft()
                    w = rr_worker[x]
                    while worker_exec[x][w] is not None:
                        w = (w + 1) % workers_per_xcd
                    rr_worker[x] = (w + 1) % workers_per_xcd
                    units = _task_units(task, machine, traversal,
                                        distribution, window)
                    worker_exec[x][w] = _WorkerExec(task, units)
                    busy_workers[x] += 1
                    dispatches += 1
                    qaddr = QUEUE_BASE + (x * workers_per_xcd + w) * line
                    h.access(x, qaddr, "store", AccessModifier.DEFAULT,
                             AccessRole.SYNC, w, step)
                    h.access(x, qaddr, "load", AccessModifier.DEFAULT,
                             AccessRole.SYNC, w, step)
                    if keep_event_log:
                        log.append(
                            (step, f"sched.x{x}", "dispatch", task.id)
                        )

        # 3. execute one unit per busy worker (or one cooperative step per
        #    active chiplet task)
        progress = False
        for x in range(num_xcds):
            ce = chiplet_exec[x]
            if ce is not None:
                progress = True
                unit = next(ce.units, None)
                if unit is not None:
                    access = h.access
                    for a in unit:
                        access(x, a.addr, a.kind, a.modifier, a.role,
                               a.worker, step)
                else:
                    # all workers complete this step; local counting first,
                    # the final increment pays the fence + global atomic
                    task = ce.task
                    eid = task.signal_event
                    key = event_index[eid]
                    counts = local_counts[x]
                    for w in range(workers_per_xcd):
                        local_atomics += 1
                        counts[key] = counts.get(key, 0) + 1
                        caddr = (
                            LOCAL_COUNTER_BASE
                            + (x * len(event_ids) + key) * line
                        )
                        h.access(x, caddr, "store", AccessModifier.DEFAULT,
                                 AccessRole.SYNC, w, step)
                        if counts[key] == workers_per_xcd:
                            fences_issued += 1
                            fence_flush_lines += h.flush_l2(x) // line
                            global_atomic(eid, x, w, step)
                    counts[key] = 0
                    chiplet_exec[x] = None
                    completed += 1
                    if keep_event_log:
                        log.append((step, f"xcd{x}", "complete", task.id))
                continue
            row = worker_exec[x]
            for w in range(workers_per_xcd):
                we = row[w]
                if we is None:
                    continue
                progress = True
                unit = next(we.units, None)
                if unit is not None:
                    access = h.access
                    for a in unit:
                        access(x, a.addr, a.kind, a.modifier, a.role, w, step)
                else:
                    eid = we.task.signal_event
                    if eid is not None:
                        global_atomic(eid, x, w, step)
                    row[w] = None
                    busy_workers[x] -= 1
                    completed += 1
                    if keep_event_log:
                        log.append(
                            (step, f"worker.x{x}.w{w}", "complete",
                             we.task.id)
                        )

        if not progress and not pending_fired:
            stuck = sorted(set(event_ids) - fired)
            raise DeadlockError(
                "no runnable task; unfired events: " + ", ".join(stuck)
            )
        step += 1

    # events completing on the final step never went through a poll phase
    for eid in pending_fired:
        fired.add(eid)
        stage_fire_bytes[eid] = data_bytes_now()
        if keep_event_log:
            log.append((step, "events", "fire", eid))

    # stage costs: HBM data bytes between consecutive stage completions
    stage_costs = []
    prev_bytes = 0
    for s in g.stages:
        now = stage_fire_bytes.get(s.event_id, prev_bytes)
        stage_costs.append(
            StageCost(s.name, s.layer, s.flops, max(0, now - prev_bytes))
        )
        prev_bytes = now

    est = (
        sum(
            max(
                sc.hbm_bytes / machine.hbm_bandwidth_bytes_per_s,
                sc.flops / machine.peak_flops,
            )
            for sc in stage_costs
        )
        + dispatch_overhead_s * dispatches
        + fence_seconds_per_line * fence_flush_lines
    )

    model = g.model
    return SimTrace(
        mode=g.mode,
        batch=g.batch,
        traversal=traversal.value,
        distribution=distribution.value,
        machine=machine,
        model_fingerprint=(
            (model.hidden_dim, model.ffn_dim, model.q_heads, model.kv_heads,
             model.dtype_bytes)
            if model is not None
            else None
        ),
        steps=step,
        metrics=h.snapshot_metrics(),
        fences_issued=fences_issued,
        fence_flush_lines=fence_flush_lines,
        global_atomics=global_atomics,
        local_atomics=local_atomics,
        poll_count=poll_count,
        dispatches=dispatches,
        stage_costs=tuple(stage_costs),
        estimated_time_s=est,
        event_log=tuple(log),
        policy_notes=(
            f"llc_fill={h.llc_fill}",
            f"wbl2_target={h.wbl2_target}",
            "poll_interval=1_step",
            "queue_depth=unbounded",
        ),
    )


@dataclass(frozen=True)
class ComparisonReport:
    """Metrics of ``b`` normalized to baseline ``a`` (ratio = b / a)."""

    baseline: SimTrace
    candidate: SimTrace
    ratios: dict

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "baseline_mode": self.baseline.mode,
            "candidate_mode": self.candidate.mode,
            "batch": self.baseline.batch,
            "ratios": dict(self.ratios),
            "baseline_weight_hit_rate":
                self.baseline.metrics.weight_l2_hit_rate,
            "candidate_weight_hit_rate":
                self.candidate.metrics.weight_l2_hit_rate,
        }


def _ratio(b, a):
    if a == 0:
        return 1.0 if b == 0 else float("inf")
    return b / a


def compare(a: SimTrace, b: SimTrace) -> ComparisonReport:
    """Compare two traces of the same workload under different policies."""
    if a.machine != b.machine:
        raise CompareError("traces come from different machines")
    if a.model_fingerprint != b.model_fingerprint or a.batch != b.batch:
        raise CompareError("traces come from different model/batch configs")
    ma, mb = a.metrics, b.metrics
    ratios = {
        "l2_hit_rate": _ratio(mb.l2_hit_rate, ma.l2_hit_rate),
        "weight_l2_hit_rate": _ratio(mb.weight_l2_hit_rate,
                                     ma.weight_l2_hit_rate),
        "hbm_read_bytes": _ratio(mb.hbm_read_bytes, ma.hbm_read_bytes),
        "hbm_write_bytes": _ratio(mb.hbm_write_bytes, ma.hbm_write_bytes),
        "hbm_weight_read_bytes": _ratio(
            mb.hbm_read_bytes_for(AccessRole.WEIGHT),
            ma.hbm_read_bytes_for(AccessRole.WEIGHT),
        ),
        "fences": _ratio(b.fences_issued, a.fences_issued),
        "global_atomics": _ratio(b.global_atomics, a.global_atomics),
        "local_atomics": _ratio(b.local_atomics, a.local_atomics),
        "dispatches": _ratio(b.dispatches, a.dispatches),
        "est_time_s": _ratio(b.estimated_time_s, a.estimated_time_s),
    }
    return ComparisonReport(baseline=a, candidate=b, ratios=ratios)


def make_trace_sink(fileobj):
    """A ``trace_sink`` writing one JSON object per access line."""

    def sink(record):
        fileobj.write(json.dumps(record, separators=(",", ":")) + "\n")

    return sink
