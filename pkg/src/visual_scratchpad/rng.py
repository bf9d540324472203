"""Portable seeding.

Every sample is driven by a numpy ``Generator`` over the Philox-4x64
counter-based bit generator (10 rounds, the Random123 constants), keyed by a
64-bit seed.  Per-sample seeds come from :func:`stable_hash`, a chained
SplitMix64 finalizer, so that any sample can be regenerated in isolation and
the derivation can be reproduced outside Python.

    stable_hash(a, b, ...) = mix(... mix(mix(0 ^ a) ^ b) ...)
    mix(x) = SplitMix64 finalizer of (x + 0x9E3779B97F4A7C15) mod 2**64
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    z = (x + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def stable_hash(*parts: int) -> int:
    """Mix integers into a 64-bit seed; independent of ``PYTHONHASHSEED``."""
    h = 0
    for p in parts:
        h = splitmix64(h ^ (int(p) & MASK64))
    return h


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed) & MASK64))


def sample_seed(master_seed: int, index: int) -> int:
    return stable_hash(master_seed, index)
