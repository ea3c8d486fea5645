"""Build decode-layer task graphs in both decompositions and compare them.

The standard decomposition shatters each linear operator into enough
CU-level tile tasks to fill the device; the chiplet decomposition emits one
cooperative task per XCD per GEMM and fuses the SiLU into the gate/up task.
The interesting delta is synchronization: one completion signal per task
means the standard graph posts workers-per-XCD times more cross-chiplet
events per GEMM.
"""

from pathlib import Path

from chipletsim import (
    build_decoder_layer,
    cross_chiplet_event_reduction,
    graph_to_dot,
    model_preset,
    preset,
    validate_graph,
)
from chipletsim.taskgraph import build_gemm_graph

MI350 = preset("mi350")
QWEN = model_preset("qwen3-8b")

for mode in ("standard", "chiplet"):
    g = build_decoder_layer(QWEN, MI350, mode, batch=1)
    validate_graph(g)
    print(f"\n{mode} decode layer, batch 1: {len(g.tasks)} tasks, "
          f"{len(g.events)} events")
    for name, count in g.op_counts[0]:
        print(f"  {name:>14}: {count}")

print("\nPer-GEMM completion signals, standard vs chiplet:")
shape = (1, 512, 3968)  # tiles into exactly 248 CU tasks = all workers
std = build_gemm_graph(MI350, shape, (16, 16, 256), "standard")
chip = build_gemm_graph(MI350, shape, (16, 16, 256), "chiplet")
print(f"  standard: {len(std.tasks)} signals; chiplet: {len(chip.tasks)}; "
      f"reduction = {cross_chiplet_event_reduction(std, chip):.0f}x "
      f"(= workers per XCD)")

out = Path("decoder_layer_chiplet.dot")
out.write_text(graph_to_dot(build_decoder_layer(QWEN, MI350, "chiplet", 1)))
print(f"\nwrote stage-level DOT graph to ./{out} (render with `dot -Tpng`)")
