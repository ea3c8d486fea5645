"""Walk through the partitioned memory hierarchy's access semantics.

Shows the three cache modifiers in action on a miniature two-XCD machine:
default LRU caching, streaming lines that yield first under pressure, and
non-temporal stores that bypass the L2 entirely.  Also demonstrates the
victim LLC and why two XCDs reading the same line both fetch it from HBM.
"""

from chipletsim import AccessModifier, MachineConfig, MemHierarchy

LINE = 128

machine = MachineConfig(
    num_xcds=2,
    cus_per_xcd=4,
    workers_per_xcd=3,
    l2_capacity_bytes=4 * LINE,  # 4-line L2 so evictions are easy to see
    l2_line_bytes=LINE,
    llc_capacity_bytes=16 * LINE,
    hbm_bandwidth_bytes_per_s=1e9,
    l2_bandwidth_bytes_per_s=1e10,
    peak_flops=1e12,
)


def show(label, outcome):
    print(f"  {label:<46} -> {outcome.value}")


print("1. Cold miss, then hit:")
h = MemHierarchy(machine)
show("load A on XCD 0 (cold)", h.access(0, 0 * LINE, "load"))
show("load A on XCD 0 again", h.access(0, 0 * LINE, "load"))

print("\n2. Private L2s: XCD 1 cannot see XCD 0's copy:")
show("load A on XCD 1", h.access(1, 0 * LINE, "load"))

print("\n3. Streaming lines are sacrificed before default lines:")
h = MemHierarchy(machine)
h.access(0, 0 * LINE, "load", AccessModifier.STREAMING)
for i in range(1, 4):
    h.access(0, i * LINE, "load")  # fill the remaining 3 lines, default
h.access(0, 4 * LINE, "load")  # one over capacity: the streaming line goes
show("reload the streaming line", h.access(0, 0 * LINE, "load"))
show("reload a default line", h.access(0, 1 * LINE, "load"))

print("\n4. The LLC is a victim cache: evicted lines get a second chance:")
h = MemHierarchy(machine)
h.access(0, 0 * LINE, "load")
for i in range(1, 6):
    h.access(0, i * LINE, "load")  # push line 0 out of the 4-line L2
show("reload the evicted line", h.access(0, 0 * LINE, "load"))

print("\n5. Non-temporal stores bypass the L2 and invalidate copies:")
h = MemHierarchy(machine)
h.access(0, 0 * LINE, "load")
show("NT store to the cached line",
     h.access(0, 0 * LINE, "store", AccessModifier.NON_TEMPORAL))
show("load after the NT store", h.access(0, 0 * LINE, "load"))

print("\n6. Explicit writeback (the cross-XCD visibility fence):")
h = MemHierarchy(machine)
h.access(0, 0 * LINE, "store")  # default store: dirty line in L2
flushed = h.flush_l2(0)
print(f"  flush_l2 wrote back {flushed} bytes; a second flush writes "
      f"{h.flush_l2(0)}")

m = h.snapshot_metrics()
print(f"\ncounters: l2 hits={m.total_l2_hits} misses={m.total_l2_misses} "
      f"hbm read={m.hbm_read_bytes}B written={m.hbm_write_bytes}B")
