"""Undirected graphs in compressed adjacency form, plus KADABRA preprocessing.

Vertices are dense integers ``0..n-1``. The original ids found in the input
file are kept in :attr:`Graph.labels` so results can be written back in the
caller's id space.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np
from numba import njit

MAX_VERTEX_ID = 2**32 - 1
COMMENT_PREFIXES = ("%", "#")


class GraphError(ValueError):
    pass


class ParseError(GraphError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class EmptyGraphError(GraphError):
    pass


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable symmetric adjacency structure.

    ``neighbors[offsets[v]:offsets[v + 1]]`` lists the neighbors of ``v`` in
    ascending order. Every undirected edge is stored twice.
    """

    offsets: np.ndarray
    neighbors: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        for arr in (self.offsets, self.neighbors, self.labels):
            arr.setflags(write=False)

    @property
    def num_vertices(self) -> int:
        return len(self.offsets) - 1

    @property
    def num_edges(self) -> int:
        return len(self.neighbors) // 2

    def neighbors_of(self, v: int) -> np.ndarray:
        return self.neighbors[self.offsets[v] : self.offsets[v + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    def edges(self) -> np.ndarray:
        """Each undirected edge once, as rows ``(u, v)`` with ``u < v``."""
        src = np.repeat(np.arange(self.num_vertices, dtype=np.int64), self.degrees())
        mask = src < self.neighbors
        return np.column_stack([src[mask], self.neighbors[mask]])

    @classmethod
    def from_edges(cls, num_vertices: int, edges, labels=None) -> "Graph":
        """Build from an ``(m, 2)`` array of dense ids.

        Self-loops are dropped and parallel edges collapsed.
        """
        if num_vertices < 1:
            raise EmptyGraphError("graph has no vertices")
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= num_vertices):
            raise GraphError("edge endpoint out of range")
        e = e[e[:, 0] != e[:, 1]]
        e = np.unique(np.sort(e, axis=1), axis=0)
        src = np.concatenate([e[:, 0], e[:, 1]])
        dst = np.concatenate([e[:, 1], e[:, 0]])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        offsets = np.zeros(num_vertices + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=num_vertices), out=offsets[1:])
        if labels is None:
            labels = np.arange(num_vertices, dtype=np.int64)
        labels = np.asarray(labels, dtype=np.int64)
        if len(labels) != num_vertices:
            raise GraphError("labels length does not match vertex count")
        return cls(offsets, dst.astype(np.int64), labels)


def _parse_id(token: str, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(lineno, f"malformed vertex id {token!r}") from None
    if value < 0 or value > MAX_VERTEX_ID:
        raise ParseError(lineno, f"vertex id {value} outside [0, 2^32-1]")
    return value


def parse_edge_list(text: str | Iterable[str]) -> Graph:
    """Parse whitespace-separated ``u v`` lines into a :class:`Graph`.

    Lines starting with ``%`` or ``#`` are comments; columns beyond the first
    two (weights, timestamps) are ignored. Ids are remapped densely in order
    of first appearance.
    """
    lines = text.splitlines() if isinstance(text, str) else text
    remap: dict[int, int] = {}
    pairs: list[tuple[int, int]] = []
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith(COMMENT_PREFIXES):
            continue
        tokens = stripped.split()
        if len(tokens) < 2:
            raise ParseError(lineno, "expected two vertex ids")
        u = remap.setdefault(_parse_id(tokens[0], lineno), len(remap))
        v = remap.setdefault(_parse_id(tokens[1], lineno), len(remap))
        pairs.append((u, v))
    if not remap:
        raise EmptyGraphError("edge list contains no vertices")
    labels = np.fromiter(remap.keys(), dtype=np.int64, count=len(remap))
    return Graph.from_edges(len(remap), np.array(pairs, dtype=np.int64), labels)


def read_edge_list(path: str | Path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh)


def format_edge_list(g: Graph) -> str:
    """Serialize with original ids, one edge per line, in a form that parses back.

    Isolated vertices are written as self-loops, which the parser drops while
    keeping the vertex.
    """
    lab = g.labels
    lines = [f"{lab[u]} {lab[v]}\n" for u, v in g.edges()]
    lines += [f"{lab[v]} {lab[v]}\n" for v in np.flatnonzero(g.degrees() == 0)]
    return "".join(lines)


@njit(nogil=True, cache=True)
def _bfs_fill(offsets, neighbors, src, dist, queue):
    """Breadth-first distances from ``src`` into ``dist`` (-1 = unreached).

    Returns ``(number of reached vertices, eccentricity)``; the reached
    vertices are ``queue[:count]``.
    """
    dist[src] = 0
    queue[0] = src
    head = 0
    tail = 1
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        for i in range(offsets[u], offsets[u + 1]):
            w = neighbors[i]
            if dist[w] < 0:
                dist[w] = du + 1
                queue[tail] = w
                tail += 1
    return tail, dist[queue[tail - 1]]


@dataclass(frozen=True)
class ComponentLabels:
    label: np.ndarray
    num_components: int

    def same(self, u: int, v: int) -> bool:
        return self.label[u] == self.label[v]


def connected_components(g: Graph) -> ComponentLabels:
    n = g.num_vertices
    label = np.full(n, -1, dtype=np.int64)
    dist = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    count = 0
    for v in range(n):
        if label[v] >= 0:
            continue
        reached, _ = _bfs_fill(g.offsets, g.neighbors, v, dist, queue)
        label[queue[:reached]] = count
        count += 1
    label.setflags(write=False)
    return ComponentLabels(label, count)


def bfs_distances(g: Graph, source: int) -> np.ndarray:
    dist = np.full(g.num_vertices, -1, dtype=np.int64)
    queue = np.empty(g.num_vertices, dtype=np.int64)
    _bfs_fill(g.offsets, g.neighbors, source, dist, queue)
    return dist


def eccentricity_bound(g: Graph, start: int) -> int:
    """Twice the eccentricity of ``start``: a diameter bound for its component."""
    return 2 * int(bfs_distances(g, start).max())


def diameter_upper_bound(g: Graph, components: ComponentLabels | None = None) -> int:
    """Twice the eccentricity of each component's maximum-degree vertex, maximized.

    Ties between equal degrees go to the smallest vertex id.
    """
    if components is None:
        components = connected_components(g)
    deg = g.degrees()
    # max degree per component, smallest id among ties: sort by (label, -deg, id)
    order = np.lexsort((np.arange(g.num_vertices), -deg, components.label))
    first = np.ones(len(order), dtype=bool)
    first[1:] = components.label[order[1:]] != components.label[order[:-1]]
    starts = order[first]

    dist = np.full(g.num_vertices, -1, dtype=np.int64)
    queue = np.empty(g.num_vertices, dtype=np.int64)
    bound = 0
    for s in starts:
        reached, ecc = _bfs_fill(g.offsets, g.neighbors, s, dist, queue)
        bound = max(bound, 2 * int(ecc))
        dist[queue[:reached]] = -1
    return bound
