"""Small synthetic graphs for tests, samples, and desk-scale benchmarks."""

from __future__ import annotations

import numpy as np

from .graph import Graph


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(n: int) -> Graph:
    """Center 0 plus ``n - 1`` leaves."""
    return Graph.from_edges(n, [(0, i) for i in range(1, n)])


def complete_graph(n: int) -> Graph:
    iu = np.triu_indices(n, 1)
    return Graph.from_edges(n, np.column_stack(iu))


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p): every unordered pair independently with probability ``p``."""
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(n, 1)
    keep = rng.random(len(iu[0])) < p
    return Graph.from_edges(n, np.column_stack([iu[0][keep], iu[1][keep]]))


def gnm(n: int, m: int, seed: int) -> Graph:
    """About ``m`` uniformly random edges (self-loops and repeats dropped)."""
    rng = np.random.default_rng(seed)
    return Graph.from_edges(n, rng.integers(0, n, size=(m, 2)))
