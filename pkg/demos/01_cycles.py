"""Cycles: one long loop or two short ones, and how the scratchpad tells them apart.

Run:  python demos/01_cycles.py [out_dir]
"""
import os
import sys

from visual_scratchpad import cycles
from visual_scratchpad.raster import save_image
from visual_scratchpad.rng import make_rng

out = sys.argv[1] if len(sys.argv) > 1 else "demo_output"
os.makedirs(out, exist_ok=True)

# "cycles 8" has 2n = 8 nodes, so n_half = 4
rng = make_rng(2024)
one_loop = cycles.make_cycles_instance(4, 1, rng)
two_loops = cycles.make_cycles_instance(4, 0, rng)

for name, g in [("connected", one_loop), ("split", two_loops)]:
    print(name, "edges:", sorted(g.edges), "rightmost node:", g.rightmost)
    sched = cycles.cycles_frame_schedule(g)
    # frame 1 is just the rightmost node, each later frame grows by one hop
    for k, colored in enumerate(sched.sets, 1):
        print(f"  frame {k}: {len(colored)} of {g.num_nodes} nodes blue")
    save_image(cycles.render_cycles_input(g), os.path.join(out, f"cycles_{name}_input.png"))
    save_image(cycles.render_cycles_frame(g, sched.final),
               os.path.join(out, f"cycles_{name}_final.png"))

# the final frame alone settles the label: all nodes blue means one cycle
print("labels:", cycles.cycles_label(one_loop), cycles.cycles_label(two_loops))
