"""Shared types and helpers used by every task module."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence


class ParameterError(ValueError):
    """Raised when generator parameters are infeasible or out of range."""


class ContractError(ValueError):
    """Raised when an operation is called outside its precondition."""


class BudgetExceededError(RuntimeError):
    """Raised when an enumeration or step budget is exhausted."""


@dataclass(frozen=True)
class FrameSequence:
    """Colored sets of the scratchpad frames 1..T.

    ``sets[k - 1]`` is the set of node, anchor or cell indices colored in
    frame ``k``.  Edges and segments are not stored: a connection is colored
    exactly when both of its endpoints are.
    """

    sets: tuple[frozenset[int], ...]

    def __len__(self) -> int:
        return len(self.sets)

    def __getitem__(self, k: int) -> frozenset[int]:
        return self.sets[k]

    @property
    def halt_index(self) -> int:
        return len(self.sets)

    @property
    def final(self) -> frozenset[int]:
        return self.sets[-1]


def adjacency_lists(n: int, edges: Iterable[Sequence[int]]) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    return adj


def bfs_distances(adj: Sequence[Sequence[int]], source: int) -> dict[int, int]:
    """Hop distances from ``source`` to every reachable vertex."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for v in adj[u]:
            if v not in dist:
                dist[v] = du
                queue.append(v)
    return dist


def hop_ball_schedule(dist: dict[int, int]) -> FrameSequence:
    """Frames k = 1..ecc+1 coloring the hop ball of radius k-1."""
    ecc = max(dist.values())
    by_radius = sorted(dist.items(), key=lambda kv: kv[1])
    sets = []
    colored: set[int] = set()
    i = 0
    for radius in range(ecc + 1):
        while i < len(by_radius) and by_radius[i][1] <= radius:
            colored.add(by_radius[i][0])
            i += 1
        sets.append(frozenset(colored))
    return FrameSequence(tuple(sets))
