"""Roofline view of batched GEMV decode: nominal vs effective intensity.

A batched GEMV at batch B performs 2*B FLOPs for every weight element it
loads, so its nominal arithmetic intensity in FLOP/byte equals B (bf16).
Cache reuse removes HBM traffic, lifting the effective intensity to
B / (1 - hit_rate) and sliding each point rightward toward the ridge.
"""

from chipletsim import preset, roofline, roofline_point, weight_hit_model

MI350 = preset("mi350")

print(f"machine peak {MI350.peak_flops / 1e12:.0f} TFLOP/s, "
      f"HBM {MI350.hbm_bandwidth_bytes_per_s / 1e12:.1f} TB/s, "
      f"ridge at {MI350.ridge_point:.1f} FLOP/byte\n")

print(f"{'batch':>6} {'hit%':>6} {'AI nom':>8} {'AI eff':>8} "
      f"{'attainable':>12} {'vs nominal':>11}")
for batch in (1, 8, 16, 32, 64):
    # model-predicted weight hit rate under cooperative tiling, 16-row tiles
    hit = weight_hit_model(MI350.workers_per_xcd, batch, 16)
    p = roofline_point(MI350, batch, hit)
    base = roofline(p.ai_nominal, MI350)
    print(f"{batch:>6} {100 * hit:>5.0f}% {p.ai_nominal:>8.1f} "
          f"{p.ai_effective:>8.1f} {p.attainable_flops / 1e12:>9.1f} TF "
          f"{p.attainable_flops / base:>10.2f}x")

print("""
At batch 32 the model predicts a 50% weight hit rate, which doubles the
effective intensity (32 -> 64 FLOP/byte) and with it the attainable
throughput; the measured-rate variant of the same point (51% hit) lands at
65.3 FLOP/byte and 346 TFLOP/s.  Everything here is far left of the ~245
FLOP/byte ridge, which is why decode stays bandwidth-bound and why every
percentage point of L2 reuse shows up directly in tokens per second.
""")
