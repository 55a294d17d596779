"""Uniform random shortest paths between uniformly random vertex pairs.

The traversal keeps distances and path counts in per-thread arrays that are
never cleared between traversals. A 7-bit timestamp per vertex says which
traversal last wrote the vertex's entries; the array is wiped once every
128 traversals, when the stamp wraps around.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ..graph import ComponentLabels, Graph

STAMP_PERIOD = 128
# outside the 7-bit range, so it never equals a live stamp
STAMP_CLEAR = 0x80


@njit(nogil=True, cache=True)
def _next_stamp(stamp, counter):
    c = counter[0]
    cur = c % 128
    if cur == 0:
        stamp[:] = 0x80
    counter[0] = c + 1
    return cur


@njit(nogil=True, cache=True)
def _path_between(offsets, neighbors, s, t, dist, sigma, stamp, cur, queue, out, rng):
    """Write the internal vertices of a random shortest s-t path into ``out``.

    Returns the number of vertices written, or -1 if ``t`` is unreachable.
    Vertices are written from ``t``'s side towards ``s``.
    """
    stamp[s] = cur
    dist[s] = 0
    sigma[s] = 1.0
    queue[0] = s
    head = 0
    tail = 1
    dt = -1
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        if dt >= 0 and du >= dt:
            break
        su = sigma[u]
        for i in range(offsets[u], offsets[u + 1]):
            w = neighbors[i]
            if stamp[w] != cur:
                stamp[w] = cur
                dist[w] = du + 1
                sigma[w] = su
                queue[tail] = w
                tail += 1
                if w == t:
                    dt = du + 1
            elif dist[w] == du + 1:
                sigma[w] += su
    if stamp[t] != cur:
        return -1

    # walk back from t, picking predecessor p with probability sigma[p] / sigma[v]
    k = 0
    v = t
    while True:
        r = rng.random() * sigma[v]
        want = dist[v] - 1
        chosen = -1
        for i in range(offsets[v], offsets[v + 1]):
            p = neighbors[i]
            if stamp[p] == cur and dist[p] == want:
                chosen = p
                r -= sigma[p]
                if r < 0.0:
                    break
        v = chosen
        if v == s:
            return k
        out[k] = v
        k += 1


@njit(nogil=True, cache=True)
def _sample(offsets, neighbors, comp, dist, sigma, stamp, counter, queue, out, rng):
    n = len(comp)
    s = rng.integers(0, n)
    t = rng.integers(0, n - 1)
    if t >= s:
        t += 1
    if comp[s] != comp[t]:
        return 0
    cur = _next_stamp(stamp, counter)
    return _path_between(offsets, neighbors, s, t, dist, sigma, stamp, cur, queue, out, rng)


@njit(nogil=True, cache=True)
def _sample_fixed(offsets, neighbors, s, t, dist, sigma, stamp, counter, queue, out, rng):
    cur = _next_stamp(stamp, counter)
    return _path_between(offsets, neighbors, s, t, dist, sigma, stamp, cur, queue, out, rng)


class PathScratch:
    """Per-thread traversal buffers. Never share one between threads."""

    def __init__(self, n: int):
        self.dist = np.zeros(n, dtype=np.int64)
        self.sigma = np.zeros(n, dtype=np.float64)
        self.stamp = np.full(n, STAMP_CLEAR, dtype=np.uint8)
        self.counter = np.zeros(1, dtype=np.int64)
        self.queue = np.empty(n, dtype=np.int64)
        self.out = np.empty(max(n, 1), dtype=np.int64)

    @property
    def traversals(self) -> int:
        return int(self.counter[0])


def sample_path(g: Graph, components: ComponentLabels, scratch: PathScratch, rng: np.random.Generator) -> np.ndarray:
    """One KADABRA sample: internal vertices of a shortest path between a random pair.

    The pair ``(s, t)``, ``s != t``, is uniform over ordered pairs. A pair in
    different components yields an empty array without a traversal. The
    returned array is a view into ``scratch`` and is overwritten by the next
    call.
    """
    k = _sample(
        g.offsets, g.neighbors, components.label,
        scratch.dist, scratch.sigma, scratch.stamp, scratch.counter, scratch.queue, scratch.out, rng,
    )
    return scratch.out[:k]


def sample_path_between(g: Graph, s: int, t: int, scratch: PathScratch, rng: np.random.Generator) -> np.ndarray | None:
    """Internal vertices of a uniformly random shortest s-t path, ``None`` if disconnected."""
    if s == t:
        raise ValueError("s and t must differ")
    k = _sample_fixed(
        g.offsets, g.neighbors, s, t,
        scratch.dist, scratch.sigma, scratch.stamp, scratch.counter, scratch.queue, scratch.out, rng,
    )
    if k < 0:
        return None
    return scratch.out[:k]
