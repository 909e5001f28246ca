"""Seeded random graph and scenario generators for checks and tests."""

from __future__ import annotations

import numpy as np

from .asymptotics import LeaderSet
from .graphs import VisibilityGraph, connected_components


def random_graph(rng, n: int = None, p: float = None, radius: float = 1.0) -> VisibilityGraph:
    """Erdos-Renyi style graph, possibly disconnected."""
    if n is None:
        n = int(rng.integers(2, 13))
    if p is None:
        p = float(rng.uniform(0.2, 0.9))
    edges = set()
    for i in range(n - 1):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.add((i, j))
    return VisibilityGraph(n=n, edges=frozenset(edges), radius=radius)


def random_connected_graph(
    rng, n: int = None, extra: float = None, radius: float = 1.0
) -> VisibilityGraph:
    """Random spanning tree plus a random sprinkle of extra edges."""
    if n is None:
        n = int(rng.integers(2, 13))
    if extra is None:
        extra = float(rng.uniform(0.0, 0.6))
    order = rng.permutation(n)
    edges = set()
    for k in range(1, n):
        attach = order[int(rng.integers(0, k))]
        a, b = int(order[k]), int(attach)
        edges.add((min(a, b), max(a, b)))
    for i in range(n - 1):
        for j in range(i + 1, n):
            if (i, j) not in edges and rng.random() < extra:
                edges.add((i, j))
    g = VisibilityGraph(n=n, edges=frozenset(edges), radius=radius)
    assert len(connected_components(g)) == 1
    return g


def random_leaders(rng, n: int, allow_all: bool = True) -> LeaderSet:
    """Nonempty random leader subset; optionally forbid the everyone case."""
    hi = n if allow_all else n - 1
    k = int(rng.integers(1, max(hi, 1) + 1))
    picks = rng.choice(n, size=k, replace=False)
    return LeaderSet.of(picks.tolist())


def complete_positions(rng, n: int, radius: float) -> np.ndarray:
    """Positions inside a disc of diameter ``radius``: every pair is in range."""
    angles = rng.uniform(0, 2 * np.pi, size=n)
    radii = 0.5 * radius * np.sqrt(rng.uniform(0, 1, size=n))
    return np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])
