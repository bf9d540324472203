"""The step function a recurrent model imitates: frame in, (frame, label, halt) out.

Run:  python demos/04_oracle.py [out_dir]
"""
import sys

from visual_scratchpad.oracle import initial_state, oracle_step, run_to_halt, write_teacher_forcing
from visual_scratchpad.rng import make_rng
from visual_scratchpad.tasks import make_instance

out = sys.argv[1] if len(sys.argv) > 1 else "demo_output"

inst = make_instance("maze-rect", 24, 1, make_rng(11), "main")

state = initial_state(inst)
while True:
    step = oracle_step(state)
    decided = "decided" if step.label_decided else "not yet decided"
    print(f"step {step.next.step_index}: {len(step.next.colored_set)} cells, "
          f"label {step.label_estimate} ({decided}), halt={step.halt}")
    if step.halt:
        break
    state = step.next

# stepping past the end just repeats the last frame
again = oracle_step(step.next)
print("fixed point:", again.next.colored_set == step.next.colored_set)

run = run_to_halt(inst)
print("run_to_halt:", run.steps_taken, "steps, label", run.label)
print("teacher forcing index:", write_teacher_forcing(inst, "demo", out + "/teacher_forcing"))
