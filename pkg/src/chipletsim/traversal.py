"""Tile schedules and access streams for one GEMM partition.

A chiplet-level GEMM task computes an ``[M, K] x [K, N_local]`` slice, where
``N_local`` is the device GEMM's column count divided across XCDs.  Workers
on the XCD divide the ``(m, n)`` output-tile grid among themselves; the
traversal order decides whether workers touch the same weight column at the
same time (and therefore whether the second worker's weight loads hit in the
shared L2) or stream disjoint columns.

Two traversal orders:

* ``M_MAJOR_WINDOWED``: global tile order runs down the batch (M) dimension
  within one weight-column group before advancing to the next column, so the
  workers assigned to a column process it concurrently.
* ``N_MAJOR``: global tile order runs along columns within one batch row, so
  concurrent workers always hold distinct weight columns.

Two distributions:

* ``M_TILE``: all workers share the full tile grid round-robin in traversal
  order; cooperative weight sharing happens whenever a column holds more
  than one tile.
* ``M_SPLIT``: the ablation.  Workers sweep the grid one batch row at a time
  with columns statically split round-robin across workers, so no two
  workers ever share a weight column concurrently and each batch row
  re-streams the full weight partition.

Execution interleave: the simulator serializes the XCD's concurrent workers
by rotating line-granular accesses across all tiles of the active slot (one
column group under ``M_MAJOR_WINDOWED``, one round of per-worker tiles
otherwise), one K-chunk per tile per step.  The rotation is what makes
cooperative reuse visible to the cache model: the first tile to touch a
weight line misses and its slot-mates hit immediately after.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from .memsim import AccessModifier, AccessRole


class ScheduleError(ValueError):
    """Inconsistent partition, schedule, or worker arguments."""


class Traversal(Enum):
    N_MAJOR = "n_major"
    M_MAJOR_WINDOWED = "m_major_windowed"


class Distribution(Enum):
    M_TILE = "m_tile"
    M_SPLIT = "m_split"


@dataclass(frozen=True)
class GemmPartition:
    """One XCD's slice of a GEMM plus its tiling and buffer layout.

    Buffers are row-major and contiguous per partition: weights ``[K,
    N_local]`` at ``weight_base`` (the runtime hands each XCD a pointer to
    its own pre-sliced slab), activations ``[M, K]`` at ``act_base`` (shared
    by all XCDs), outputs ``[M, N_local]`` at ``out_base``.

    ``fused_halves=True`` models an activation fused into the producing GEMM
    (gate/up + SiLU): the two column halves combine into one output of half
    the width, attributed to the second half's tiles, instead of each column
    storing its own output.
    """

    M: int
    K: int
    N_local: int
    T_M: int
    T_N: int
    T_K: int
    weight_base: int
    act_base: int
    out_base: int
    dtype_bytes: int
    fused_halves: bool = False

    def __post_init__(self):
        for name in ("M", "K", "N_local", "T_M", "T_N", "T_K", "dtype_bytes"):
            if getattr(self, name) <= 0:
                raise ScheduleError(f"nonpositive {name}")

    @property
    def m_tiles(self) -> int:
        return -(-self.M // self.T_M)

    @property
    def n_tiles(self) -> int:
        return -(-self.N_local // self.T_N)

    @property
    def k_chunks(self) -> int:
        return -(-self.K // self.T_K)

    @property
    def weight_bytes(self) -> int:
        return self.K * self.N_local * self.dtype_bytes


@dataclass(frozen=True)
class TileSchedule:
    """Per-worker tile lists plus the execution slotting.

    ``worker_tiles[w]`` is worker ``w``'s ordered ``(m_idx, n_idx)`` list.
    ``slots`` groups tiles that execute concurrently: each slot is a tuple of
    ``(m_idx, n_idx, worker)`` entries whose accesses the simulator rotates
    at line granularity, K-chunk by K-chunk.
    """

    worker_tiles: tuple
    slots: tuple
    traversal: Traversal
    distribution: Distribution
    workers: int


def schedule(
    p: GemmPartition,
    workers: int,
    traversal: Traversal,
    distribution: Distribution,
    xcd: int = 0,
    num_xcds: int = 1,
    window: int = 1,
) -> TileSchedule:
    """Assign the partition's tile grid to ``workers`` workers.

    ``window`` is the number of column groups an M-major slot spans before
    advancing (1 reproduces the strict one-column window).  ``xcd`` rotates
    the starting batch row under ``M_SPLIT`` so concurrently running XCDs
    work on different batch rows at any instant.
    """
    if workers < 1:
        raise ScheduleError("need at least one worker")
    if window < 1:
        raise ScheduleError("window must be at least one column group")
    if not 0 <= xcd < num_xcds:
        raise ScheduleError(f"xcd {xcd} out of range for {num_xcds} XCDs")
    m_tiles, n_tiles = p.m_tiles, p.n_tiles

    if distribution is Distribution.M_SPLIT:
        # Column-disjoint workers, one batch row at a time.  Row order starts
        # at this XCD's assigned row and wraps, covering the whole grid.
        # Slots never span a row boundary, so no slot ever holds the same
        # weight column twice.
        owner = lambda m, n: n % workers  # noqa: E731
        order = []
        slots = []
        start = xcd % m_tiles
        for i in range(m_tiles):
            m = (start + i) % m_tiles
            row = [(m, n) for n in range(n_tiles)]
            order.extend(row)
            for j in range(0, n_tiles, workers):
                slots.append(
                    tuple((m, n, owner(m, n)) for m, n in row[j : j + workers])
                )
        worker_tiles = [[] for _ in range(workers)]
        for m, n in order:
            worker_tiles[owner(m, n)].append((m, n))
        return TileSchedule(
            worker_tiles=tuple(tuple(ts) for ts in worker_tiles),
            slots=tuple(slots),
            traversal=traversal,
            distribution=distribution,
            workers=workers,
        )
    if traversal is Traversal.M_MAJOR_WINDOWED:
        order = [(m, n) for n in range(n_tiles) for m in range(m_tiles)]
        owner = lambda m, n: (n * m_tiles + m) % workers  # noqa: E731
        # A slot spans whole column groups; widen past `window` only as far
        # as needed to keep every worker occupied when columns hold fewer
        # tiles than there are workers.
        columns_per_slot = max(window, -(-workers // m_tiles))
        slot_size = m_tiles * columns_per_slot
    else:
        order = [(m, n) for m in range(m_tiles) for n in range(n_tiles)]
        owner = lambda m, n: (m * n_tiles + n) % workers  # noqa: E731
        slot_size = workers

    worker_tiles = [[] for _ in range(workers)]
    for m, n in order:
        worker_tiles[owner(m, n)].append((m, n))
    slots = tuple(
        tuple((m, n, owner(m, n)) for m, n in order[i : i + slot_size])
        for i in range(0, len(order), slot_size)
    )
    return TileSchedule(
        worker_tiles=tuple(tuple(ts) for ts in worker_tiles),
        slots=slots,
        traversal=traversal,
        distribution=distribution,
        workers=workers,
    )


def _line_range(base: int, start: int, nbytes: int, line: int):
    """Line-aligned addresses covering ``[base+start, base+start+nbytes)``."""
    lo = (base + start) // line * line
    hi = base + start + nbytes
    return range(lo, hi, line)


def line_span(base: int, nbytes: int, line_bytes: int):
    """Line-aligned addresses covering ``nbytes`` starting at ``base``."""
    return _line_range(base, 0, nbytes, line_bytes)


def _tile_lines(base, row0, rows, col0, cols, row_width, dtype, line):
    """Distinct line addresses of a row-major ``rows x cols`` tile."""
    row_bytes = row_width * dtype
    out = []
    seen_last = -1
    for r in range(row0, row0 + rows):
        for a in _line_range(base, r * row_bytes + col0 * dtype, cols * dtype, line):
            if a != seen_last:  # consecutive rows can share a line when cols*dtype < line
                out.append(a)
                seen_last = a
    return out


class Access(NamedTuple):
    addr: int
    kind: str
    modifier: AccessModifier
    role: AccessRole
    worker: int


class AccessStream:
    """Lazily generated per-step access groups for one scheduled partition.

    Iterating yields lists of :class:`Access`, one list per interleave step;
    within a step, accesses are already in the deterministic rotation order
    the runtime replays.  Weight loads are ``STREAMING``, activation loads
    ``DEFAULT``, output stores ``NON_TEMPORAL`` (they bypass L2 so transient
    results never evict weights).
    """

    def __init__(self, sched: TileSchedule, p: GemmPartition, line_bytes: int):
        if line_bytes <= 0:
            raise ScheduleError("nonpositive line size")
        self.sched = sched
        self.partition = p
        self.line_bytes = line_bytes
        self._check_bounds()

    def _check_bounds(self):
        p = self.partition
        for slot in self.sched.slots:
            for m, n, _ in slot:
                if m >= p.m_tiles or n >= p.n_tiles:
                    raise ScheduleError(
                        f"tile ({m}, {n}) outside the {p.m_tiles}x{p.n_tiles} grid"
                    )

    def __iter__(self):
        p = self.partition
        line = self.line_bytes
        n_half = p.n_tiles // 2
        for slot in self.sched.slots:
            for k in range(p.k_chunks):
                k0 = k * p.T_K
                krows = min(p.T_K, p.K - k0)
                per_tile = []
                for m, n, w in slot:
                    m0, n0 = m * p.T_M, n * p.T_N
                    mrows = min(p.T_M, p.M - m0)
                    ncols = min(p.T_N, p.N_local - n0)
                    unit = [
                        Access(a, "load", AccessModifier.STREAMING,
                               AccessRole.WEIGHT, w)
                        for a in _tile_lines(p.weight_base, k0, krows, n0,
                                             ncols, p.N_local, p.dtype_bytes,
                                             line)
                    ]
                    unit += [
                        Access(a, "load", AccessModifier.DEFAULT,
                               AccessRole.ACTIVATION, w)
                        for a in _tile_lines(p.act_base, m0, mrows, k0, krows,
                                             p.K, p.dtype_bytes, line)
                    ]
                    if k == p.k_chunks - 1:
                        unit += self._store_unit(m, n, w, n_half)
                    per_tile.append(unit)
                yield _rotate(per_tile)

    def _store_unit(self, m, n, w, n_half):
        p = self.partition
        m0 = m * p.T_M
        mrows = min(p.T_M, p.M - m0)
        if p.fused_halves:
            if n < n_half:
                return []  # first-half tiles hold their result in registers
            out_n0 = (n - n_half) * p.T_N
            out_width = p.N_local // 2
        else:
            out_n0 = n * p.T_N
            out_width = p.N_local
        ncols = min(p.T_N, out_width - out_n0)
        return [
            Access(a, "store", AccessModifier.NON_TEMPORAL, AccessRole.OUTPUT, w)
            for a in _tile_lines(p.out_base, m0, mrows, out_n0, ncols,
                                 out_width, p.dtype_bytes, self.line_bytes)
        ]

    def flat(self):
        """All accesses in execution order (materializes; small cases only)."""
        out = []
        for step in self:
            out.extend(step)
        return out


def _rotate(per_tile):
    """Merge per-tile access units round-robin, one access per tile per turn."""
    if len(per_tile) == 1:
        return per_tile[0]
    merged = []
    for i in range(max(len(u) for u in per_tile)):
        for unit in per_tile:
            if i < len(unit):
                merged.append(unit[i])
    return merged


def lower_to_accesses(
    s: TileSchedule, p: GemmPartition, line_bytes: int
) -> AccessStream:
    """Lower a schedule to its line-granular access stream."""
    return AccessStream(s, p, line_bytes)


def schedule_to_json(s: TileSchedule) -> dict:
    """Stable JSON form: per-worker tile lists plus the execution slots."""
    return {
        "schema_version": 1,
        "traversal": s.traversal.value,
        "distribution": s.distribution.value,
        "workers": [
            [[m, n] for m, n in tiles] for tiles in s.worker_tiles
        ],
        "slots": [
            [[m, n, w] for m, n, w in slot] for slot in s.slots
        ],
    }
