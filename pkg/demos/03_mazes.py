"""Mazes: Kruskal spanning tree, a start/end pair and one re-inserted wall.

Run:  python demos/03_mazes.py [out_dir]
"""
import os
import sys

from visual_scratchpad import maze
from visual_scratchpad.raster import save_image
from visual_scratchpad.rng import make_rng

out = sys.argv[1] if len(sys.argv) > 1 else "demo_output"
os.makedirs(out, exist_ok=True)

print("ring counts of a 16-ring maze:", maze.circular_ring_counts(16))

rng = make_rng(3)
for kind, size, regime in [("rect", 32, "main"), ("rect", 32, "easy"), ("circular", 16, "main")]:
    inst = maze.make_maze_instance(kind, size, 1, rng, regime)
    sched = maze.maze_frame_schedule(inst)
    print(f"{kind} {size} {regime}: d_target={inst.d_target} d_max={inst.d_max} "
          f"frames={len(sched)}")
    stem = os.path.join(out, f"maze_{kind}_{regime}")
    save_image(maze.render_maze_input(inst), stem + "_input.png")
    # each frame spreads the blue region 10 steps further from the start
    for k, colored in enumerate(sched.sets, 1):
        save_image(maze.render_maze_frame(inst, colored), f"{stem}_f{k:02d}.png")

# label 0 puts the wall on the start-end path, so the search never finds red
cut = maze.make_maze_instance("rect", 16, 0, make_rng(4), "easy")
print("end reached when label is 0?", cut.end in maze.maze_frame_schedule(cut).final)
