"""End-to-end scenario sweep with a mode comparison table.

Runs the full pipeline (config load, graph build, deterministic simulation,
metrics files) for three scheduling modes across a batch sweep.  The model
here is sized so each per-XCD weight partition overflows the toy machine's
64 KiB L2: that is the regime where cooperative tiling matters, and where
the m-split ablation gives the traffic win back.  Swap in the `mi350` /
`qwen3-8b` presets to reproduce production-scale numbers (minutes).
"""

import json
import tempfile
from pathlib import Path

from chipletsim import Scenario, run_scenario

SMALL_MODEL = {
    "hidden_dim": 256,
    "ffn_dim": 512,
    "num_layers": 2,
    "q_heads": 4,
    "kv_heads": 2,
    "dtype_bytes": 2,
}

with tempfile.TemporaryDirectory() as tmp:
    model_path = Path(tmp) / "small_model.json"
    model_path.write_text(json.dumps(SMALL_MODEL))

    sc = Scenario(
        machine="toy",
        model=str(model_path),
        modes=("standard", "chiplet_m_tile", "chiplet_m_split"),
        batches=(1, 16, 32, 48),
        out=str(Path(tmp) / "small_metrics.csv"),
    )
    result = run_scenario(sc)

    print(f"{len(result.rows)} scenario points\n")
    print(f"{'scenario':>44} {'L2%':>6} {'wL2%':>6} {'HBM rd':>10} "
          f"{'fences':>7} {'atomics':>8}")
    for sid, mode, batch, trace in result.rows:
        m = trace.metrics
        print(f"{sid:>44} {100 * m.l2_hit_rate:>5.1f} "
              f"{100 * m.weight_l2_hit_rate:>5.1f} "
              f"{m.hbm_read_bytes:>10} {trace.fences_issued:>7} "
              f"{trace.global_atomics:>8}")

    print("\nsummary (HBM columns normalized to standard):\n")
    print(Path(result.summary_path).read_text())

print("""
Two separate effects are visible.  Global atomics collapse in both chiplet
modes at every batch size: one completion signal per XCD replaces one per
tile task.  The weight-load hit rate (wL2%) only rises in m-tile mode and
only once the batch spans several 16-row tiles, and the HBM read column
tracks it; m-split keeps the scheduling benefit but re-reads weights once
per batch tile, so its read traffic grows with the batch instead.
""")
