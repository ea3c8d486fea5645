"""Partitioned memory hierarchy simulator.

Models one private, non-coherent L2 per XCD, a shared last-level cache that
acts as a victim cache for L2 evictions, and HBM behind it.  Accesses are
line-granular, tagged with a modifier (how the caches treat the line) and a
role (what the bytes are: weights, activations, outputs, or runtime
synchronization traffic), so traffic can be attributed per role afterwards.

Modifier semantics:

* ``DEFAULT`` loads and stores allocate in the local L2 under LRU; stores
  write-allocate and mark the line dirty.
* ``STREAMING`` loads allocate but mark the line for preferential eviction:
  when space is needed, streaming lines are evicted before any default line,
  LRU-first within each class.
* ``NON_TEMPORAL`` never allocates: stores go straight to HBM (invalidating
  any cached copy), loads read HBM uncached.  Used for transient outputs and
  cross-XCD event polling.

A request from XCD ``i`` only ever probes XCD ``i``'s L2 (wave scope: no
cross-XCD coherence probes); on a miss it falls through to the LLC and then
HBM.  Dirty L2 victims are inserted into the LLC; dirty LLC victims are
written back to HBM.

Caches are fully associative with exact LRU.  The hardware's set structure is
unpublished, and full associativity keeps the replacement policy equal to the
brute-force reference model the tests check against.  Set-associativity would
slot in as an alternative ``CacheLevel``.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass
from enum import Enum, IntEnum

from .machine import MachineConfig


class MemAccessError(ValueError):
    """Malformed access: bad XCD index or misaligned address."""


class AccessModifier(Enum):
    DEFAULT = "default"
    STREAMING = "streaming"
    NON_TEMPORAL = "non_temporal"


class AccessRole(IntEnum):
    """What an access is for; drives per-role traffic attribution."""

    WEIGHT = 0
    ACTIVATION = 1
    OUTPUT = 2
    SYNC = 3


class Outcome(Enum):
    L2_HIT = "l2_hit"
    LLC_HIT = "llc_hit"
    HBM = "hbm"


_N_ROLES = len(AccessRole)


class CacheLevel:
    """Fully associative cache with two-class (streaming-first) LRU.

    Lines live in one of two ordered maps keyed by line tag; map order is
    recency (oldest first).  Eviction pops the oldest streaming line if any
    streaming line is resident, otherwise the oldest default line.
    """

    __slots__ = ("capacity_lines", "line_bytes", "_default", "_streaming")

    def __init__(self, capacity_bytes: int, line_bytes: int):
        self.capacity_lines = capacity_bytes // line_bytes
        self.line_bytes = line_bytes
        self._default: OrderedDict[int, bool] = OrderedDict()  # tag -> dirty
        self._streaming: OrderedDict[int, bool] = OrderedDict()

    def __len__(self) -> int:
        return len(self._default) + len(self._streaming)

    def lookup(self, tag: int) -> bool:
        """Probe for ``tag``; refresh recency on hit."""
        if tag in self._default:
            self._default.move_to_end(tag)
            return True
        if tag in self._streaming:
            self._streaming.move_to_end(tag)
            return True
        return False

    def mark_dirty(self, tag: int) -> None:
        if tag in self._default:
            self._default[tag] = True
        elif tag in self._streaming:
            self._streaming[tag] = True

    def is_dirty(self, tag: int) -> bool:
        return self._default.get(tag, False) or self._streaming.get(tag, False)

    def insert(self, tag: int, streaming: bool, dirty: bool):
        """Insert a line, returning evicted ``(tag, dirty)`` victims.

        The incoming line is never its own victim: when it is the only
        streaming-class resident, eviction falls through to the oldest
        default line.
        """
        victims = []
        target = self._streaming if streaming else self._default
        target[tag] = dirty
        target.move_to_end(tag)
        while len(self._default) + len(self._streaming) > self.capacity_lines:
            if self._streaming and not (
                streaming and len(self._streaming) == 1
            ):
                victims.append(self._streaming.popitem(last=False))
            else:
                victims.append(self._default.popitem(last=False))
        return victims

    def remove(self, tag: int) -> bool:
        """Drop ``tag`` if resident; returns whether it was dirty."""
        if tag in self._default:
            return self._default.pop(tag)
        if tag in self._streaming:
            return self._streaming.pop(tag)
        return False

    def dirty_tags(self):
        return [t for t, d in self._default.items() if d] + [
            t for t, d in self._streaming.items() if d
        ]

    def clean(self, tag: int) -> None:
        if tag in self._default:
            self._default[tag] = False
        elif tag in self._streaming:
            self._streaming[tag] = False

    def resident_tags(self):
        return set(self._default) | set(self._streaming)


@dataclass(frozen=True)
class Metrics:
    """Immutable counter snapshot.

    Per-XCD lists are indexed by XCD; per-role lists by :class:`AccessRole`.
    HBM byte counters are attributed to the requesting XCD and the access
    role that triggered the transfer (eviction writebacks are attributed to
    the access that forced the eviction).
    """

    l2_hits: tuple
    l2_misses: tuple
    llc_hits: tuple
    llc_misses: tuple
    hbm_read_bytes_by_role: tuple
    hbm_write_bytes_by_role: tuple
    l2_hits_by_role: tuple
    l2_misses_by_role: tuple

    @property
    def total_l2_hits(self) -> int:
        return sum(self.l2_hits)

    @property
    def total_l2_misses(self) -> int:
        return sum(self.l2_misses)

    @property
    def hbm_read_bytes(self) -> int:
        return sum(self.hbm_read_bytes_by_role)

    @property
    def hbm_write_bytes(self) -> int:
        return sum(self.hbm_write_bytes_by_role)

    @property
    def l2_hit_rate(self) -> float:
        total = self.total_l2_hits + self.total_l2_misses
        return self.total_l2_hits / total if total else 0.0

    def l2_hit_rate_for(self, xcd: int) -> float:
        total = self.l2_hits[xcd] + self.l2_misses[xcd]
        return self.l2_hits[xcd] / total if total else 0.0

    def role_hit_rate(self, role: AccessRole) -> float:
        hits = self.l2_hits_by_role[role]
        total = hits + self.l2_misses_by_role[role]
        return hits / total if total else 0.0

    @property
    def weight_l2_hit_rate(self) -> float:
        return self.role_hit_rate(AccessRole.WEIGHT)

    def hbm_read_bytes_for(self, role: AccessRole) -> int:
        return self.hbm_read_bytes_by_role[role]


class MemHierarchy:
    """Mutable per-device memory state: one L2 per XCD, one LLC, HBM counters.

    ``llc_fill`` selects when lines enter the LLC: ``"victim_only"`` (the
    default: only L2 evictions land there) or ``"on_fill"`` (L2 fills are
    mirrored into the LLC as well, for sensitivity studies).  ``wbl2_target``
    selects where explicit L2 flushes send dirty lines: the LLC (default) or
    straight to HBM.  Instances are single-threaded state machines; run
    concurrent experiments on separate instances.
    """

    def __init__(
        self,
        machine: MachineConfig,
        llc_fill: str = "victim_only",
        wbl2_target: str = "llc",
        llc_capacity_bytes: int | None = None,
    ):
        if llc_fill not in ("victim_only", "on_fill"):
            raise ValueError(f"unknown llc_fill policy {llc_fill!r}")
        if wbl2_target not in ("llc", "hbm"):
            raise ValueError(f"unknown wbl2_target {wbl2_target!r}")
        self.machine = machine
        self.line_bytes = machine.l2_line_bytes
        self.llc_fill = llc_fill
        self.wbl2_target = wbl2_target
        self.l2 = [
            CacheLevel(machine.l2_capacity_bytes, self.line_bytes)
            for _ in range(machine.num_xcds)
        ]
        llc_bytes = (
            machine.llc_capacity_bytes
            if llc_capacity_bytes is None
            else llc_capacity_bytes
        )
        # llc_capacity_bytes=0 disables the LLC (misses go straight to HBM);
        # used by the reference-model equivalence tests.
        self.llc = CacheLevel(llc_bytes, self.line_bytes) if llc_bytes else None
        n = machine.num_xcds
        self._l2_hits = [0] * n
        self._l2_misses = [0] * n
        self._llc_hits = [0] * n
        self._llc_misses = [0] * n
        self._hbm_read_by_role = [0] * _N_ROLES
        self._hbm_write_by_role = [0] * _N_ROLES
        self._l2_hits_by_role = [0] * _N_ROLES
        self._l2_misses_by_role = [0] * _N_ROLES
        self.trace_sink = None  # callable(record dict), set by the runtime

    def _insert_llc(self, tag: int, dirty: bool, role: int) -> None:
        if self.llc is None:
            if dirty:
                self._hbm_write_by_role[role] += self.line_bytes
            return
        if self.llc.lookup(tag):
            if dirty:
                self.llc.mark_dirty(tag)
            return
        for vtag, vdirty in self.llc.insert(tag, streaming=False, dirty=dirty):
            if vdirty:
                self._hbm_write_by_role[role] += self.line_bytes

    def access(
        self,
        xcd: int,
        addr: int,
        kind: str,
        modifier: AccessModifier = AccessModifier.DEFAULT,
        role: AccessRole = AccessRole.ACTIVATION,
        worker: int = -1,
        step: int = -1,
    ) -> Outcome:
        """Issue one line-sized access from ``xcd`` and return where it hit.

        ``kind`` is ``"load"`` or ``"store"``.  ``worker``/``step`` are only
        recorded in the optional access trace.
        """
        if not 0 <= xcd < self.machine.num_xcds:
            raise MemAccessError(f"XCD index {xcd} out of range")
        if addr % self.line_bytes != 0:
            raise MemAccessError(
                f"address {addr:#x} not aligned to {self.line_bytes}-byte lines"
            )
        if kind not in ("load", "store"):
            raise MemAccessError(f"unknown access kind {kind!r}")

        tag = addr // self.line_bytes
        r = int(role)
        if modifier is AccessModifier.NON_TEMPORAL:
            if kind == "store":
                # Bypass L2 entirely; drop any cached copies so later loads
                # observe the store from HBM.
                self.l2[xcd].remove(tag)
                if self.llc is not None:
                    self.llc.remove(tag)
                self._hbm_write_by_role[r] += self.line_bytes
            else:
                self._hbm_read_by_role[r] += self.line_bytes
            outcome = Outcome.HBM
        else:
            l2 = self.l2[xcd]
            if l2.lookup(tag):
                self._l2_hits[xcd] += 1
                self._l2_hits_by_role[r] += 1
                if kind == "store":
                    l2.mark_dirty(tag)
                outcome = Outcome.L2_HIT
            else:
                self._l2_misses[xcd] += 1
                self._l2_misses_by_role[r] += 1
                dirty_fill = kind == "store"
                if self.llc is not None and self.llc.lookup(tag):
                    self._llc_hits[xcd] += 1
                    # Exclusive victim cache: promote the line back into L2.
                    dirty_fill = self.llc.remove(tag) or dirty_fill
                    outcome = Outcome.LLC_HIT
                else:
                    if self.llc is not None:
                        self._llc_misses[xcd] += 1
                    self._hbm_read_by_role[r] += self.line_bytes
                    outcome = Outcome.HBM
                streaming = modifier is AccessModifier.STREAMING
                for vtag, vdirty in l2.insert(tag, streaming, dirty_fill):
                    self._insert_llc(vtag, vdirty, r)
                if self.llc_fill == "on_fill" and outcome is Outcome.HBM:
                    self._insert_llc(tag, dirty=False, role=r)

        sink = self.trace_sink
        if sink is not None:
            sink(
                {
                    "step": step,
                    "xcd": xcd,
                    "worker": worker,
                    "addr": addr,
                    "kind": kind,
                    "modifier": modifier.value,
                    "role": AccessRole(role).name.lower(),
                    "outcome": outcome.value,
                }
            )
        return outcome

    def flush_l2(self, xcd: int, role: AccessRole = AccessRole.SYNC) -> int:
        """Write back all dirty lines on ``xcd``; returns bytes written.

        Lines stay resident and clean.  Dirty data goes to the LLC or to HBM
        per ``wbl2_target``.  Never touches hit/miss counters.
        """
        if not 0 <= xcd < self.machine.num_xcds:
            raise MemAccessError(f"XCD index {xcd} out of range")
        l2 = self.l2[xcd]
        r = int(role)
        written = 0
        for tag in l2.dirty_tags():
            l2.clean(tag)
            written += self.line_bytes
            if self.wbl2_target == "hbm" or self.llc is None:
                self._hbm_write_by_role[r] += self.line_bytes
            else:
                self._insert_llc(tag, dirty=True, role=r)
        return written

    def snapshot_metrics(self) -> Metrics:
        return Metrics(
            l2_hits=tuple(self._l2_hits),
            l2_misses=tuple(self._l2_misses),
            llc_hits=tuple(self._llc_hits),
            llc_misses=tuple(self._llc_misses),
            hbm_read_bytes_by_role=tuple(self._hbm_read_by_role),
            hbm_write_bytes_by_role=tuple(self._hbm_write_by_role),
            l2_hits_by_role=tuple(self._l2_hits_by_role),
            l2_misses_by_role=tuple(self._l2_misses_by_role),
        )
