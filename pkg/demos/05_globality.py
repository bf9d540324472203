"""How many revealed nodes does it take to learn anything about the label?

Run:  python demos/05_globality.py
"""
from visual_scratchpad.globality import exact_mi_profile, monte_carlo_mi, patch_mask
from visual_scratchpad.raster import Canvas
from visual_scratchpad.rng import make_rng

# exact enumeration over every structure of 6 nodes (70 of them)
for k, bits in exact_mi_profile(3).items():
    print(f"6 nodes, {k} revealed: {bits:.4f} bits")

# with 8 nodes the information still creeps in gradually
print({k: round(v, 4) for k, v in exact_mi_profile(4).items()})

# Monte Carlo over the real sampler lands within a few standard errors
est = monte_carlo_mi(3, 2, 50_000, make_rng(0))
print(f"Monte Carlo, 2 revealed: {est.bits:.4f} +- {est.stderr:.4f}")

# patch masking on a 224 px image: each 16 px patch goes gray with prob p
_, mask = patch_mask(Canvas.blank(224), 0.3, make_rng(1))
print("masked patches:", int(mask.sum()), "of", mask.size)
