"""How much do a few nodes tell you about the cycles label?

A revealed node exposes the identities of its two neighbours.  For small
graphs every structure the cycles sampler can produce is enumerated with its
probability, giving I(observation; label) exactly.  A Monte Carlo estimate
over the real sampler is provided as a cross-check, plus the 16x16 patch
masking applied to rendered 224x224 images.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

import numpy as np

from .core import BudgetExceededError, ParameterError
from .cycles import sample_cycle_loops
from .raster import GRAY, Canvas

MAX_EXACT_N_HALF = 6
PATCH = 16
MASK_SIZE = 224


class Structure(NamedTuple):
    neighbours: tuple[tuple[int, int], ...]
    label: int
    probability: float

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset((min(u, v), max(u, v)) for u, nb in enumerate(self.neighbours)
                         for v in nb)


def _cyclic_orders(nodes):
    """Each undirected cycle through ``nodes`` once (first node fixed, no mirrors)."""
    first, rest = nodes[0], nodes[1:]
    for perm in itertools.permutations(rest):
        if perm[0] < perm[-1]:
            yield (first,) + perm


def _neighbours(loops, m):
    nb = [None] * m
    for loop in loops:
        k = len(loop)
        for i, v in enumerate(loop):
            a, b = loop[i - 1], loop[(i + 1) % k]
            nb[v] = (a, b) if a < b else (b, a)
    return tuple(nb)


def _count_structures(n_half: int) -> tuple[int, int]:
    m = 2 * n_half
    ones = math.factorial(m - 1) // 2
    zeros = math.comb(m - 1, n_half - 1) * (math.factorial(n_half - 1) // 2) ** 2
    return zeros, ones


def enumerate_cycle_structures(n_half: int) -> Iterator[Structure]:
    """Every structure the cycles sampler can emit, with its probability.

    Labels are equiprobable and each sampler is uniform over its support, so
    a label-1 structure has probability 1/2 / ((2n-1)!/2) and a label-0 one
    1/2 / (C(2n-1, n-1) ((n-1)!/2)^2).  Yields lazily; n_half = 6 already
    means about 2e7 structures.
    """
    if n_half < 3:
        raise ParameterError("n_half must be at least 3")
    if n_half > MAX_EXACT_N_HALF:
        raise BudgetExceededError(f"exact enumeration is limited to n_half <= {MAX_EXACT_N_HALF}")
    m = 2 * n_half
    zeros, ones = _count_structures(n_half)
    p1, p0 = 0.5 / ones, 0.5 / zeros
    nodes = tuple(range(m))
    for order in _cyclic_orders(nodes):
        yield Structure(_neighbours([order], m), 1, p1)
    for others in itertools.combinations(nodes[1:], n_half - 1):
        group_a = (0,) + others
        group_b = tuple(v for v in nodes if v not in group_a)
        for la in _cyclic_orders(group_a):
            for lb in _cyclic_orders(group_b):
                yield Structure(_neighbours([la, lb], m), 0, p0)


@dataclass
class DistributionTable:
    """Outcome -> [weight with label 0, weight with label 1]."""

    counts: dict = field(default_factory=lambda: defaultdict(lambda: [0.0, 0.0]))

    def add(self, outcome, label: int, weight: float = 1.0) -> None:
        self.counts[outcome][label] += weight

    @property
    def total(self) -> float:
        return sum(a + b for a, b in self.counts.values())

    def mutual_information(self) -> float:
        """Plug-in I(outcome; label) in bits from the (normalized) table."""
        total = self.total
        py = [sum(c[y] for c in self.counts.values()) / total for y in (0, 1)]
        mi = 0.0
        for c in self.counts.values():
            po = (c[0] + c[1]) / total
            for y in (0, 1):
                if c[y] > 0:
                    pj = c[y] / total
                    mi += pj * math.log2(pj / (po * py[y]))
        return max(mi, 0.0)

    def mi_stderr(self, samples: int) -> float:
        """Delta-method standard error of the plug-in estimate from ``samples`` draws."""
        total = self.total
        py = [sum(c[y] for c in self.counts.values()) / total for y in (0, 1)]
        m1 = m2 = 0.0
        for c in self.counts.values():
            po = (c[0] + c[1]) / total
            for y in (0, 1):
                if c[y] > 0:
                    pj = c[y] / total
                    ll = math.log2(pj / (po * py[y]))
                    m1 += pj * ll
                    m2 += pj * ll * ll
        return math.sqrt(max(m2 - m1 * m1, 0.0) / samples)


def _check_subset(n_half, subset):
    m = 2 * n_half
    subset = tuple(subset)
    if any(not 0 <= v < m for v in subset) or len(set(subset)) != len(subset):
        raise ParameterError(f"revealed nodes must be distinct indices in [0, {m})")
    return subset


def exact_tables(n_half: int, subsets) -> list[DistributionTable]:
    """One pass over the enumeration filling a table per revealed subset."""
    subsets = [_check_subset(n_half, s) for s in subsets]
    tables = [DistributionTable() for _ in subsets]
    for s in enumerate_cycle_structures(n_half):
        nb = s.neighbours
        for table, sub in zip(tables, subsets):
            table.add(tuple(nb[v] for v in sub), s.label, s.probability)
    return tables


def exact_mi_profile(n_half: int, ks=None) -> dict[int, float]:
    """MI in bits for the canonical subsets {0, ..., k-1}."""
    ks = list(range(2 * n_half + 1)) if ks is None else list(ks)
    tables = exact_tables(n_half, [range(k) for k in ks])
    return {k: t.mutual_information() for k, t in zip(ks, tables)}


class MIEstimate(NamedTuple):
    bits: float
    stderr: float


def monte_carlo_mi(n_half: int, k: int, samples: int, rng: np.random.Generator,
                   subset=None) -> MIEstimate:
    """Plug-in estimate over ``samples`` draws of the cycles sampler.

    Labels alternate 0, 1, 0, ... as in the dataset generator.
    """
    if samples < 2:
        raise ParameterError("need at least two samples")
    subset = _check_subset(n_half, range(k) if subset is None else subset)
    table = DistributionTable()
    m = 2 * n_half
    for i in range(samples):
        label = i % 2
        nb = _neighbours(sample_cycle_loops(n_half, label, rng), m)
        table.add(tuple(nb[v] for v in subset), label)
    return MIEstimate(table.mutual_information(), table.mi_stderr(samples))


def conditional_mi(n_half: int, k: int, mode: str = "exact", samples: int = 20000,
                   rng: np.random.Generator | None = None, subset=None) -> float:
    """I(neighbours of k revealed nodes; label) in bits.

    Node labels are exchangeable under the sampler, so the canonical subset
    {0, ..., k-1} attains the maximum over all subsets of size k.
    """
    if not 0 <= k <= 2 * n_half:
        raise ParameterError(f"k must lie in [0, {2 * n_half}]")
    if subset is not None and len(tuple(subset)) != k:
        raise ParameterError("subset size must equal k")
    if mode == "exact":
        sub = range(k) if subset is None else subset
        return exact_tables(n_half, [sub])[0].mutual_information()
    if mode == "monte_carlo":
        if rng is None:
            raise ParameterError("monte_carlo mode needs an rng")
        return monte_carlo_mi(n_half, k, samples, rng, subset).bits
    raise ParameterError(f"unknown mode {mode!r}")


def patch_mask(canvas: Canvas, p: float, rng: np.random.Generator,
               patch: int = PATCH) -> tuple[Canvas, np.ndarray]:
    """Gray out each 16x16 patch of a 224x224 image with probability ``p``.

    Draws one uniform per patch in row-major order; returns the masked copy
    and the (14, 14) boolean mask.
    """
    if canvas.width != MASK_SIZE or canvas.height != MASK_SIZE:
        raise ParameterError(f"patch masking expects {MASK_SIZE}x{MASK_SIZE} images")
    if not 0.0 <= p <= 1.0:
        raise ParameterError("p must lie in [0, 1]")
    g = MASK_SIZE // patch
    mask = rng.random((g, g)) < p
    out = canvas.copy()
    full = np.repeat(np.repeat(mask, patch, axis=0), patch, axis=1)
    out.pixels[full] = GRAY
    return out, mask
