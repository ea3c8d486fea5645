"""Validate the cooperative weight-reuse model against the simulator.

The closed-form model says that with W workers per XCD and m_tiles batch
tiles, R = min(W, m_tiles) workers share each weight tile, so the L2 hit
rate on weight loads is (R-1)/R.  Here we sweep the batch size on the toy
machine, simulate one N-split GEMM per point in both distributions, and put
the measured weight-load hit rates next to the model.
"""

from chipletsim import (
    AccessRole,
    Distribution,
    build_gemm_graph,
    model_vs_sim,
    preset,
    simulate,
    weight_hit_model,
)

TOY = preset("toy")
TILE = (16, 64, 256)
GEMM_KN = (512, 1024)  # K, N   (N splits into 512 columns per XCD)

print(f"toy machine: {TOY.num_xcds} XCDs, {TOY.workers_per_xcd} workers/XCD,"
      f" {TOY.l2_capacity_bytes // 1024} KiB L2")
print(f"{'batch':>6} {'m_tiles':>8} {'model':>8} {'m_tile sim':>11} "
      f"{'m_split sim':>12} {'rd ratio':>9}")

for m_tiles in (1, 2, 3, 4, 6):
    batch = 16 * m_tiles
    predicted = weight_hit_model(TOY.workers_per_xcd, batch, TILE[0])

    traces = {}
    for dist in (Distribution.M_TILE, Distribution.M_SPLIT):
        g = build_gemm_graph(TOY, (batch, *GEMM_KN), TILE, "chiplet")
        traces[dist] = simulate(g, TOY, distribution=dist)

    tile_m = traces[Distribution.M_TILE].metrics
    split_m = traces[Distribution.M_SPLIT].metrics
    ratio = (
        tile_m.hbm_read_bytes_for(AccessRole.WEIGHT)
        / split_m.hbm_read_bytes_for(AccessRole.WEIGHT)
    )
    print(f"{batch:>6} {m_tiles:>8} {predicted:>8.3f} "
          f"{tile_m.weight_l2_hit_rate:>11.3f} "
          f"{split_m.weight_l2_hit_rate:>12.3f} {ratio:>9.2f}")

    rec = model_vs_sim(tile_m, predicted, tolerance=0.05)
    if m_tiles <= TOY.workers_per_xcd:
        assert rec.passed, rec

print("""
Up to m_tiles = W the simulation lands exactly on (R-1)/R; beyond that the
whole column rotates through more batch tiles than there are workers and
the measured reuse keeps climbing as (m_tiles-1)/m_tiles.  The m-split
ablation never shares a column between workers, so its weight hit rate
stays at zero and it re-reads the full weight partition once per batch
tile (the rd ratio column is the cooperative mode's HBM weight reads as a
fraction of m-split's).
""")
