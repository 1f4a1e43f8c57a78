"""Measure solve time over generated instances of growing size.

Instances are double-star topologies with tiered random link levels and a
flow population proportional to the total link weight (tens of thousands of
flows at the top sizes). Writes results.csv next to this script; pass --plot
to also render the two scaling views with matplotlib.
"""

import sys
from pathlib import Path

from farsec.bench import format_bench_csv, run_bench, run_flow_scaling

SEED = 7

print("timing one instance per size (generation excluded from timings)...")
rows = run_bench(range(2, 51, 4), seed=SEED)
for row in rows:
    print(f"  size {row.size:>2}  flows {row.flows:>6}  {row.seconds * 1000:8.1f} ms")

out = Path(__file__).with_name("results.csv")
out.write_text(format_bench_csv(rows), newline="")
print(f"\nwrote {out}")

###############################################################################
# At a fixed node count the per-flow admission pass dominates, so time should
# grow about linearly once the flow population is large.

print("\nflow scaling at 30 nodes:")
scaling = run_flow_scaling(size=30, seed=SEED, multipliers=(8, 16, 32, 64, 128))
for row in scaling:
    print(f"  flows {row.flows:>6}  {row.seconds * 1000:8.1f} ms")

if "--plot" in sys.argv[1:]:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax_nodes, ax_flows) = plt.subplots(1, 2, figsize=(10, 4))
    ax_nodes.plot([r.size for r in rows], [r.seconds for r in rows], marker="o", ms=3, color="black")
    ax_nodes.set_xlabel("nodes")
    ax_nodes.set_ylabel("time (s)")
    ax_flows.plot([r.flows for r in scaling], [r.seconds for r in scaling], marker="o", ms=3, color="black")
    ax_flows.set_xlabel("flows (30 nodes)")
    ax_flows.set_ylabel("time (s)")
    fig.tight_layout()
    png = Path(__file__).with_name("scaling.png")
    fig.savefig(png, dpi=120)
    print(f"wrote {png}")
