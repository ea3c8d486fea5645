"""Four-level task graphs with event-based dependencies.

Tasks sit at one of four levels (wavefront, CU, chiplet, device) matching the
hardware scope they occupy.  Dependencies are events: a task signals one
event on completion and waits for zero or more; an event fires once its
``required_count`` completions arrive, releasing its downstream tasks.

:func:`build_decoder_layer` produces a transformer decode layer in one of two
decompositions.  ``standard`` is chiplet-unaware: every linear operator
shatters into independent CU-level tile tasks (plus a separate wavefront-task
group for the SiLU activation).  ``chiplet`` maps every linear operator onto
exactly one cooperative chiplet-level task per XCD (an N-split of the output
columns), fuses the SiLU into the gate/up task, and leaves normalization and
attention at CU level.  Attention internals are out of scope: attention tasks
carry no memory work and exist for their dependency and dispatch structure.

Graphs are immutable after building; ids are stable so exports are
byte-identical across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .machine import MachineConfig, ModelConfig
from .traversal import GemmPartition


class GraphError(ValueError):
    """Graph construction or validation failure."""


class TaskLevel(Enum):
    WAVEFRONT = "wavefront"
    CU = "cu"
    CHIPLET = "chiplet"
    DEVICE = "device"


def worker_multiplicity(level: TaskLevel, machine: MachineConfig) -> int:
    """Workers a task at ``level`` occupies on the given machine."""
    if level in (TaskLevel.WAVEFRONT, TaskLevel.CU):
        return 1
    if level is TaskLevel.CHIPLET:
        return machine.workers_per_xcd
    return machine.num_xcds * machine.workers_per_xcd


class OpKind(Enum):
    RMS_NORM = "rms_norm"
    QKV_PROJ = "qkv_proj"
    ATTN_PARTIAL = "attn_partial"
    ATTN_REDUCE = "attn_reduce"
    O_PROJ_RESIDUAL = "o_proj_residual"
    GATE_UP_SILU = "gate_up_silu"
    SILU = "silu"
    DOWN_PROJ_RESIDUAL = "down_proj_residual"


LINEAR_OPS = (
    OpKind.QKV_PROJ,
    OpKind.O_PROJ_RESIDUAL,
    OpKind.GATE_UP_SILU,
    OpKind.DOWN_PROJ_RESIDUAL,
)


@dataclass(frozen=True)
class GemmWork:
    """A whole GEMM partition, executed cooperatively (chiplet task)."""

    partition: GemmPartition
    extra_read_bytes: tuple = ()  # (base, nbytes) residual-style reads


@dataclass(frozen=True)
class GemmTileWork:
    """One output tile of a full GEMM (standard-mode CU task)."""

    partition: GemmPartition  # N_local == full N; bases are device-wide
    m_idx: int
    n_idx: int
    extra_read_bytes: tuple = ()


@dataclass(frozen=True)
class ElementwiseWork:
    """Byte-range reads/writes with no tiling structure."""

    reads: tuple = ()  # (base, nbytes)
    writes: tuple = ()  # (base, nbytes); written non-temporally


@dataclass(frozen=True)
class OpaqueWork:
    """Dependency-only task; cost and memory behavior not modeled."""


@dataclass(frozen=True)
class Task:
    id: str
    level: TaskLevel
    op_kind: OpKind
    wait_events: tuple = ()
    signal_event: str | None = None
    xcd_binding: int | None = None
    gemm_shape: tuple | None = None  # (M, K, N) of the device-wide GEMM
    tile_shape: tuple | None = None  # (T_M, T_N, T_K)
    work: object = OpaqueWork()
    stage: int = -1
    flops: int = 0


@dataclass(frozen=True)
class Event:
    id: str
    required_count: int
    downstream_tasks: tuple = ()


@dataclass(frozen=True)
class StageRecord:
    """One operator stage: its tasks all signal the same event."""

    index: int
    layer: int
    name: str
    op_kind: OpKind
    task_ids: tuple
    event_id: str
    flops: int


@dataclass(frozen=True)
class TaskGraph:
    tasks: tuple
    events: dict
    stages: tuple
    machine: MachineConfig
    model: ModelConfig | None
    batch: int
    mode: str
    op_counts: tuple = ()  # ((stage name, task count), ...) per layer
    notes: tuple = ()

    def task_by_id(self, task_id: str) -> Task:
        return self._index[task_id]

    @property
    def _index(self):
        idx = getattr(self, "_idx_cache", None)
        if idx is None:
            idx = {t.id: t for t in self.tasks}
            object.__setattr__(self, "_idx_cache", idx)
        return idx


# Standard-mode tiling whose per-operator task counts on Qwen3-8B at batch
# 1 come out to 96 / 256 / 192 / 256 tile tasks plus a 96-task SiLU group.
STANDARD_TILE_PROFILE = {
    OpKind.QKV_PROJ: (16, 64, 256),
    OpKind.O_PROJ_RESIDUAL: (16, 16, 256),
    OpKind.GATE_UP_SILU: (16, 128, 256),
    OpKind.DOWN_PROJ_RESIDUAL: (16, 16, 256),
    "silu_chunk": 128,
}

DEFAULT_CHIPLET_TILE = (16, 64, 256)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


class _Allocator:
    """Bump allocator handing out line-aligned, non-overlapping regions."""

    def __init__(self, align: int = 4096):
        self.cursor = 0
        self.align = align

    def take(self, nbytes: int) -> int:
        base = self.cursor
        self.cursor += -(-nbytes // self.align) * self.align
        return base


class _Builder:
    def __init__(self, machine: MachineConfig, model: ModelConfig | None,
                 batch: int, mode: str, dtype_bytes: int = 2):
        self.machine = machine
        self.model = model
        self.batch = batch
        self.mode = mode
        self.dtype_bytes = model.dtype_bytes if model else dtype_bytes
        self.tasks: list[Task] = []
        self.events: dict[str, Event] = {}
        self.stages: list[StageRecord] = []
        self.op_counts: list = []
        self.notes: list = []
        self.alloc = _Allocator()
        self._waits: dict[str, list] = {}

    def add_stage(self, layer, name, op_kind, tasks, wait_event, flops):
        event_id = f"e.L{layer}.{name}"
        stage_idx = len(self.stages)
        built = []
        for t in tasks:
            waits = (wait_event,) if wait_event else ()
            built.append(
                Task(
                    id=t.id, level=t.level, op_kind=op_kind,
                    wait_events=waits, signal_event=event_id,
                    xcd_binding=t.xcd_binding, gemm_shape=t.gemm_shape,
                    tile_shape=t.tile_shape, work=t.work, stage=stage_idx,
                    flops=t.flops,
                )
            )
        self.tasks.extend(built)
        self.events[event_id] = Event(event_id, required_count=len(built))
        self.stages.append(
            StageRecord(stage_idx, layer, name, op_kind,
                        tuple(t.id for t in built), event_id, flops)
        )
        for t in built:
            for e in t.wait_events:
                self._waits.setdefault(e, []).append(t.id)
        return event_id

    def finish(self) -> TaskGraph:
        events = {
            eid: Event(eid, ev.required_count,
                       tuple(self._waits.get(eid, ())))
            for eid, ev in self.events.items()
        }
        return TaskGraph(
            tasks=tuple(self.tasks),
            events=events,
            stages=tuple(self.stages),
            machine=self.machine,
            model=self.model,
            batch=self.batch,
            mode=self.mode,
            op_counts=tuple(self.op_counts),
            notes=tuple(self.notes),
        )


@dataclass(frozen=True)
class _Draft:
    """Task under construction, before events are attached."""

    id: str
    level: TaskLevel
    xcd_binding: int | None = None
    gemm_shape: tuple | None = None
    tile_shape: tuple | None = None
    work: object = OpaqueWork()
    flops: int = 0


def _check_divisible(op, dim_name, dim, tile, allow_padding):
    if dim % tile != 0 and not allow_padding:
        raise GraphError(
            f"{op.value}: tile does not divide {dim_name} ({dim} % {tile}) "
            "and padding is disabled"
        )


def _linear_stage_drafts(
    builder, layer, name, op, M, K, N, tiles, weight_base, act_base, out_base,
    mode, extra_read_bytes=(), fused_halves=False, allow_padding=True,
):
    machine = builder.machine
    t_m, t_n, t_k = tiles
    flops = 2 * M * K * N
    if mode == "standard":
        _check_divisible(op, "M", M, t_m, allow_padding)
        _check_divisible(op, "N", N, t_n, allow_padding)
        full = GemmPartition(
            M=M, K=K, N_local=N, T_M=t_m, T_N=t_n, T_K=t_k,
            weight_base=weight_base, act_base=act_base, out_base=out_base,
            dtype_bytes=builder.dtype_bytes,
        )
        n_tiles = _ceil_div(N, t_n)
        m_tiles = _ceil_div(M, t_m)
        tile_flops = flops // (n_tiles * m_tiles)
        drafts = [
            _Draft(
                id=f"L{layer}.{name}.t{m * n_tiles + n}",
                level=TaskLevel.CU,
                gemm_shape=(M, K, N),
                tile_shape=tiles,
                work=GemmTileWork(full, m, n, extra_read_bytes=()),
                flops=tile_flops,
            )
            for m in range(m_tiles)
            for n in range(n_tiles)
        ]
        if extra_read_bytes:
            # residual reads ride on the first tile task
            d0 = drafts[0]
            drafts[0] = _Draft(
                id=d0.id, level=d0.level, gemm_shape=d0.gemm_shape,
                tile_shape=d0.tile_shape,
                work=GemmTileWork(full, 0, 0, tuple(extra_read_bytes)),
                flops=d0.flops,
            )
        return drafts, flops

    if N % machine.num_xcds != 0:
        raise GraphError(
            f"{op.value}: N={N} is not divisible across "
            f"{machine.num_xcds} XCDs"
        )
    n_local = N // machine.num_xcds
    _check_divisible(op, "M", M, t_m, allow_padding)
    _check_divisible(op, "N_local", n_local, t_n, allow_padding)
    if fused_halves:
        # the fused output is written by the second-half tiles; exact halving
        # needs the tile width to divide each half
        _check_divisible(op, "N_local/2", n_local // 2, t_n, allow_padding)
    dtype = builder.dtype_bytes
    out_width = n_local // 2 if fused_halves else n_local
    drafts = []
    for x in range(machine.num_xcds):
        part = GemmPartition(
            M=M, K=K, N_local=n_local, T_M=t_m, T_N=t_n, T_K=t_k,
            weight_base=weight_base + x * K * n_local * dtype,
            act_base=act_base,
            out_base=out_base + x * M * out_width * dtype,
            dtype_bytes=dtype,
            fused_halves=fused_halves,
        )
        per_xcd_extra = tuple(
            (base + x * (nbytes // machine.num_xcds),
             nbytes // machine.num_xcds)
            for base, nbytes in extra_read_bytes
        )
        drafts.append(
            _Draft(
                id=f"L{layer}.{name}.x{x}",
                level=TaskLevel.CHIPLET,
                xcd_binding=x,
                gemm_shape=(M, K, N),
                tile_shape=tiles,
                work=GemmWork(part, per_xcd_extra),
                flops=flops // machine.num_xcds,
            )
        )
    return drafts, flops


def build_decoder_layer(
    model: ModelConfig,
    machine: MachineConfig,
    mode: str,
    batch: int,
    tile_overrides: dict | None = None,
    layers: int = 1,
    allow_padding: bool = True,
) -> TaskGraph:
    """Build ``layers`` chained decode layers for one transformer model.

    ``mode`` is ``"standard"`` or ``"chiplet"``.  ``tile_overrides`` maps an
    :class:`OpKind` (or ``"silu_chunk"``) to a replacement tile shape; the
    defaults are the reference standard-mode profile and the 16x64x256
    chiplet tile.
    """
    if mode not in ("standard", "chiplet"):
        raise GraphError(f"unknown mode {mode!r}")
    if batch < 1:
        raise GraphError("batch must be at least 1")
    if layers < 1:
        raise GraphError("layers must be at least 1")
    if machine.num_xcds <= 0:
        raise GraphError("machine has no XCDs")

    profile = dict(STANDARD_TILE_PROFILE) if mode == "standard" else {
        op: DEFAULT_CHIPLET_TILE for op in LINEAR_OPS
    }
    if mode == "chiplet":
        profile["silu_chunk"] = STANDARD_TILE_PROFILE["silu_chunk"]
    if tile_overrides:
        profile.update(tile_overrides)

    b = _Builder(machine, model, batch, mode)
    d, ffn = model.hidden_dim, model.ffn_dim
    dt = model.dtype_bytes
    B = batch

    prev_event = None
    x_in = b.alloc.take(B * d * dt)
    for layer in range(layers):
        counts = []
        # buffers for this layer
        w_qkv = b.alloc.take(d * model.qkv_dim * dt)
        w_o = b.alloc.take(d * d * dt)
        w_gu = b.alloc.take(d * model.gate_up_dim * dt)
        w_down = b.alloc.take(ffn * d * dt)
        gamma1 = b.alloc.take(d * dt)
        gamma2 = b.alloc.take(d * dt)
        normed1 = b.alloc.take(B * d * dt)
        qkv_out = b.alloc.take(B * model.qkv_dim * dt)
        attn_out = b.alloc.take(B * d * dt)
        x_mid = b.alloc.take(B * d * dt)
        normed2 = b.alloc.take(B * d * dt)
        gu_out = b.alloc.take(B * model.gate_up_dim * dt)
        silu_out = b.alloc.take(B * ffn * dt)
        x_out = b.alloc.take(B * d * dt)

        def rms_stage(name, src, dst, gamma, wait):
            draft = _Draft(
                id=f"L{layer}.{name}.t0",
                level=TaskLevel.CU,
                work=ElementwiseWork(
                    reads=((src, B * d * dt), (gamma, d * dt)),
                    writes=((dst, B * d * dt),),
                ),
                flops=4 * B * d,
            )
            counts.append((name, 1))
            return b.add_stage(layer, name, OpKind.RMS_NORM, [draft], wait,
                               4 * B * d)

        prev_event = rms_stage("rms1", x_in, normed1, gamma1, prev_event)

        drafts, fl = _linear_stage_drafts(
            b, layer, "qkv", OpKind.QKV_PROJ, B, d, model.qkv_dim,
            profile[OpKind.QKV_PROJ], w_qkv, normed1, qkv_out, mode,
            allow_padding=allow_padding,
        )
        counts.append(("qkv", len(drafts)))
        prev_event = b.add_stage(layer, "qkv", OpKind.QKV_PROJ, drafts,
                                 prev_event, fl)

        partials = [
            _Draft(id=f"L{layer}.attn_partial.t{i}", level=TaskLevel.CU)
            for i in range(model.kv_heads)
        ]
        counts.append(("attn_partial", len(partials)))
        prev_event = b.add_stage(layer, "attn_partial", OpKind.ATTN_PARTIAL,
                                 partials, prev_event, 0)
        reduces = [
            _Draft(id=f"L{layer}.attn_reduce.t{i}", level=TaskLevel.CU)
            for i in range(model.kv_heads)
        ]
        counts.append(("attn_reduce", len(reduces)))
        prev_event = b.add_stage(layer, "attn_reduce", OpKind.ATTN_REDUCE,
                                 reduces, prev_event, 0)

        drafts, fl = _linear_stage_drafts(
            b, layer, "o_proj", OpKind.O_PROJ_RESIDUAL, B, d, d,
            profile[OpKind.O_PROJ_RESIDUAL], w_o, attn_out, x_mid, mode,
            extra_read_bytes=((x_in, B * d * dt),),
            allow_padding=allow_padding,
        )
        counts.append(("o_proj", len(drafts)))
        prev_event = b.add_stage(layer, "o_proj", OpKind.O_PROJ_RESIDUAL,
                                 drafts, prev_event, fl)

        prev_event = rms_stage("rms2", x_mid, normed2, gamma2, prev_event)

        fused = mode == "chiplet"
        drafts, fl = _linear_stage_drafts(
            b, layer, "gate_up", OpKind.GATE_UP_SILU, B, d,
            model.gate_up_dim, profile[OpKind.GATE_UP_SILU], w_gu, normed2,
            silu_out if fused else gu_out, mode, fused_halves=fused,
            allow_padding=allow_padding,
        )
        counts.append(("gate_up", len(drafts)))
        prev_event = b.add_stage(layer, "gate_up", OpKind.GATE_UP_SILU,
                                 drafts, prev_event, fl)

        if not fused:
            chunk = profile["silu_chunk"]
            t_m = profile[OpKind.GATE_UP_SILU][0]
            n_chunks = _ceil_div(ffn, chunk)
            m_groups = _ceil_div(B, t_m)
            half = B * ffn * dt  # gate half size; up half follows it
            silu_tasks = []
            offset = 0
            for g in range(m_groups):
                rows = min(t_m, B - g * t_m)
                for j in range(n_chunks):
                    cols = min(chunk, ffn - j * chunk)
                    nbytes = rows * cols * dt
                    silu_tasks.append(
                        _Draft(
                            id=f"L{layer}.silu.t{g * n_chunks + j}",
                            level=TaskLevel.WAVEFRONT,
                            work=ElementwiseWork(
                                reads=((gu_out + offset, nbytes),
                                       (gu_out + half + offset, nbytes)),
                                writes=((silu_out + offset, nbytes),),
                            ),
                            flops=4 * rows * cols,
                        )
                    )
                    offset += nbytes
            counts.append(("silu", len(silu_tasks)))
            prev_event = b.add_stage(layer, "silu", OpKind.SILU, silu_tasks,
                                     prev_event, 4 * B * ffn)

        drafts, fl = _linear_stage_drafts(
            b, layer, "down", OpKind.DOWN_PROJ_RESIDUAL, B, ffn, d,
            profile[OpKind.DOWN_PROJ_RESIDUAL], w_down, silu_out, x_out,
            mode, extra_read_bytes=((x_mid, B * d * dt),),
            allow_padding=allow_padding,
        )
        counts.append(("down", len(drafts)))
        prev_event = b.add_stage(layer, "down", OpKind.DOWN_PROJ_RESIDUAL,
                                 drafts, prev_event, fl)

        b.op_counts.append(tuple(counts))
        x_in = x_out

    total = len(b.tasks)
    b.notes.append(
        f"{mode} mode: {total // layers} tasks per layer from per-op counts; "
        "the commonly quoted headline totals (1,407 standard / 543 chiplet "
        "per layer) are not reproducible from the per-op counts and are "
        "flagged rather than matched"
    )
    return b.finish()


def build_gemm_graph(
    machine: MachineConfig,
    gemm_shape: tuple,
    tiles: tuple,
    mode: str,
    op_kind: OpKind = OpKind.QKV_PROJ,
    dtype_bytes: int = 2,
    allow_padding: bool = True,
) -> TaskGraph:
    """Single-GEMM graph: the smallest runnable unit for sync accounting."""
    if mode not in ("standard", "chiplet"):
        raise GraphError(f"unknown mode {mode!r}")
    M, K, N = gemm_shape
    b = _Builder(machine, None, M, mode, dtype_bytes=dtype_bytes)
    weight = b.alloc.take(K * N * dtype_bytes)
    act = b.alloc.take(M * K * dtype_bytes)
    out = b.alloc.take(M * N * dtype_bytes)
    drafts, fl = _linear_stage_drafts(
        b, 0, "gemm", op_kind, M, K, N, tiles, weight, act, out, mode,
        allow_padding=allow_padding,
    )
    b.op_counts.append((("gemm", len(drafts)),))
    b.add_stage(0, "gemm", op_kind, drafts, None, fl)
    return b.finish()


def validate_graph(g: TaskGraph) -> None:
    """Check event closure, counts, bindings, and acyclicity."""
    task_ids = {t.id for t in g.tasks}
    if len(task_ids) != len(g.tasks):
        raise GraphError("duplicate task ids")
    signals: dict[str, int] = {}
    for t in g.tasks:
        for e in t.wait_events:
            if e not in g.events:
                raise GraphError(f"task {t.id} waits on unknown event {e}")
        if t.signal_event is not None:
            if t.signal_event not in g.events:
                raise GraphError(
                    f"task {t.id} signals unknown event {t.signal_event}"
                )
            signals[t.signal_event] = signals.get(t.signal_event, 0) + 1
        if t.level is TaskLevel.CHIPLET:
            if t.xcd_binding is None:
                raise GraphError(f"chiplet task {t.id} has no XCD binding")
            if not 0 <= t.xcd_binding < g.machine.num_xcds:
                raise GraphError(
                    f"chiplet task {t.id} bound to XCD {t.xcd_binding}, "
                    f"machine has {g.machine.num_xcds}"
                )
        elif t.xcd_binding is not None:
            raise GraphError(f"non-chiplet task {t.id} has an XCD binding")
    for eid, ev in g.events.items():
        got = signals.get(eid, 0)
        if got != ev.required_count:
            raise GraphError(
                f"event {eid} requires {ev.required_count} completions but "
                f"{got} tasks signal it"
            )
        for d in ev.downstream_tasks:
            if d not in task_ids:
                raise GraphError(f"event {eid} releases unknown task {d}")

    # cycle check over task -> signal_event -> waiting task edges
    waiting: dict[str, list] = {}
    for t in g.tasks:
        for e in t.wait_events:
            waiting.setdefault(e, []).append(t.id)
    index = {t.id: t for t in g.tasks}
    state: dict[str, int] = {}
    stack: list[str] = []

    def visit(tid):
        state[tid] = 1
        stack.append(tid)
        t = index[tid]
        if t.signal_event is not None:
            for nxt in waiting.get(t.signal_event, ()):
                if state.get(nxt, 0) == 1:
                    cycle = stack[stack.index(nxt):] + [nxt]
                    raise GraphError(f"cycle detected: {' -> '.join(cycle)}")
                if state.get(nxt, 0) == 0:
                    visit(nxt)
        stack.pop()
        state[tid] = 2

    for t in g.tasks:
        if state.get(t.id, 0) == 0:
            visit(t.id)


def cross_chiplet_event_reduction(g_standard: TaskGraph,
                                  g_chiplet: TaskGraph) -> float:
    """Ratio of completion signals per linear-stage dependency edge.

    With a GEMM decomposed to occupy every worker, the standard graph posts
    one completion per worker while the chiplet graph posts one per XCD, so
    the ratio equals workers-per-XCD.
    """
    if (g_standard.machine, g_standard.model, g_standard.batch) != (
        g_chiplet.machine, g_chiplet.model, g_chiplet.batch
    ):
        raise GraphError("graphs built from different configs")
    pairs = []
    chip_stages = {(s.layer, s.name): s for s in g_chiplet.stages
                   if s.op_kind in LINEAR_OPS}
    for s in g_standard.stages:
        if s.op_kind not in LINEAR_OPS:
            continue
        other = chip_stages.get((s.layer, s.name))
        if other is None:
            raise GraphError(f"stage {s.name} missing from second graph")
        pairs.append(len(s.task_ids) / len(other.task_ids))
    if not pairs:
        raise GraphError("no linear stages to compare")
    return sum(pairs) / len(pairs)


def graph_to_json(g: TaskGraph) -> dict:
    """Stable JSON-ready form: tasks, events, and dependency edges."""
    return {
        "schema_version": 1,
        "mode": g.mode,
        "batch": g.batch,
        "tasks": [
            {
                "id": t.id,
                "level": t.level.value,
                "op_kind": t.op_kind.value,
                "xcd": t.xcd_binding,
                "gemm_shape": list(t.gemm_shape) if t.gemm_shape else None,
                "tile_shape": list(t.tile_shape) if t.tile_shape else None,
                "wait_events": list(t.wait_events),
                "signal_event": t.signal_event,
            }
            for t in g.tasks
        ],
        "events": [
            {
                "id": eid,
                "required_count": ev.required_count,
                "downstream_tasks": list(ev.downstream_tasks),
            }
            for eid, ev in sorted(g.events.items())
        ],
        "edges": (
            [[t.id, t.signal_event] for t in g.tasks if t.signal_event]
            + [
                [eid, tid]
                for eid, ev in sorted(g.events.items())
                for tid in ev.downstream_tasks
            ]
        ),
    }


def graph_to_dot(g: TaskGraph) -> str:
    """Graphviz rendering with one node per stage (tasks grouped)."""
    lines = ["digraph taskgraph {", "  rankdir=TB;"]
    for s in g.stages:
        label = f"L{s.layer} {s.name}\\n{len(s.task_ids)} tasks"
        lines.append(f'  "s{s.index}" [shape=box, label="{label}"];')
    by_event = {s.event_id: s.index for s in g.stages}
    for s in g.stages:
        first = g.task_by_id(s.task_ids[0])
        for e in first.wait_events:
            if e in by_event:
                lines.append(f'  "s{by_event[e]}" -> "s{s.index}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
