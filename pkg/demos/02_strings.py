"""Strings: smooth closed curves through hidden anchors.

Run:  python demos/02_strings.py [out_dir]
"""
import os
import sys

from visual_scratchpad import strings
from visual_scratchpad.geometry import eval_cubic_bezier
from visual_scratchpad.raster import save_image
from visual_scratchpad.rng import make_rng

out = sys.argv[1] if len(sys.argv) > 1 else "demo_output"
os.makedirs(out, exist_ok=True)

# control points for a unit square, alpha = 0.25
ctrl = strings.compute_control_points([(0, 0), (1, 0), (1, 1), (0, 1)], 0.25)
print("first segment controls:", ctrl[0])

curve = strings.sample_strings_instance(5, 0, make_rng(7))
print("loops:", curve.loops)
# tangents match at every anchor, so the jump is rounding noise only
print("max tangent jump:", strings.continuity_report(curve))

seg = curve.segments[0]
mid = eval_cubic_bezier(curve.anchors[seg.start], seg.c1, seg.c2, curve.anchors[seg.end], 0.5)
print("midpoint of the first segment:", mid)

sched = strings.strings_frame_schedule(curve)
print("frames:", len(sched), "final colored anchors:", sorted(sched.final))
save_image(strings.render_strings_input(curve), os.path.join(out, "strings_input.png"))
save_image(strings.render_strings_frame(curve, sched.final),
           os.path.join(out, "strings_final.png"))
