"""Independent reference implementations the tests compare against.

Nothing here imports the code under test except for the Graph container.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction

import mpmath
import numpy as np


def adjacency(g):
    return [sorted(int(w) for w in g.neighbors_of(v)) for v in range(g.num_vertices)]


def bfs_counts(adj, s):
    """Distances and shortest-path counts from ``s`` (exact integers)."""
    n = len(adj)
    dist = [-1] * n
    sigma = [0] * n
    dist[s] = 0
    sigma[s] = 1
    q = deque([s])
    while q:
        u = q.popleft()
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                q.append(w)
            if dist[w] == dist[u] + 1:
                sigma[w] += sigma[u]
    return dist, sigma


def exact_normalized_bc(g) -> np.ndarray:
    """Sum over ordered pairs s != t (both != u) of sigma_st(u)/sigma_st, over n(n-1)."""
    adj = adjacency(g)
    n = len(adj)
    table = [bfs_counts(adj, s) for s in range(n)]
    bc = [Fraction(0)] * n
    for s in range(n):
        ds, ss = table[s]
        for t in range(n):
            if t == s or ds[t] < 0:
                continue
            for u in range(n):
                if u in (s, t) or ds[u] < 0:
                    continue
                du, su = table[u]
                if ds[u] + du[t] == ds[t]:
                    bc[u] += Fraction(ss[u] * su[t], ss[t])
    return np.array([float(b / (n * (n - 1))) if n > 1 else 0.0 for b in bc])


def all_shortest_paths(adj, s, t):
    """Every shortest s-t path as a tuple of vertices, by exhaustive expansion."""
    dist, _ = bfs_counts(adj, s)
    if dist[t] < 0:
        return []
    paths = []

    def extend(path):
        v = path[-1]
        if v == t:
            paths.append(tuple(path))
            return
        for w in adj[v]:
            if dist[w] == dist[v] + 1:
                extend(path + [w])

    extend([s])
    return [p for p in paths if len(p) == dist[t] + 1]


def exact_diameter(g) -> int:
    """Largest finite distance over all pairs."""
    adj = adjacency(g)
    best = 0
    for s in range(len(adj)):
        dist, _ = bfs_counts(adj, s)
        best = max(best, max(dist))
    return best


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def union_find_labels(n, edges):
    uf = UnionFind(n)
    for u, v in edges:
        uf.union(int(u), int(v))
    return [uf.find(v) for v in range(n)]


def same_partition(a, b) -> bool:
    """True if two labelings induce the same partition."""
    fwd, back = {}, {}
    for x, y in zip(a, b):
        if fwd.setdefault(x, y) != y or back.setdefault(y, x) != x:
            return False
    return True


mpmath.mp.dps = 50


def f_oracle(b, dl, omega, tau):
    b, dl, omega, tau = (mpmath.mpf(x) for x in (b, dl, omega, tau))
    L = mpmath.log(1 / dl)
    a = mpmath.mpf(1) / 3 - omega / tau
    return L / tau * (a + mpmath.sqrt(a * a + 2 * b * omega / L))


def g_oracle(b, du, omega, tau):
    b, du, omega, tau = (mpmath.mpf(x) for x in (b, du, omega, tau))
    L = mpmath.log(1 / du)
    a = mpmath.mpf(1) / 3 + omega / tau
    return L / tau * (a + mpmath.sqrt(a * a + 2 * b * omega / L))


def omega_oracle(vd, eps, delta, c=0.5):
    eps, delta, c = mpmath.mpf(eps), mpmath.mpf(delta), mpmath.mpf(c)
    m = max(vd - 2, 2)
    return int(mpmath.ceil(c / eps**2 * (mpmath.floor(mpmath.log(m, 2)) + 1 + mpmath.log(1 / delta))))


def check_oracle(data, num, dl, du, omega, eps) -> bool:
    """Scalar re-evaluation of the stopping rule, one vertex at a time."""
    if num == 0:
        return False
    if num >= omega:
        return True
    for v in range(len(data)):
        b = mpmath.mpf(int(data[v])) / num
        if f_oracle(b, dl[v], omega, num) > eps or g_oracle(b, du[v], omega, num) > eps:
            return False
    return True


def reset_reference_sample(adj, comp, rng):
    """Same draw sequence as the production sampler, with a fresh visited array per traversal.

    Returns the path's internal vertices in the order walked back from t, or
    ``None`` when the pair is disconnected (no traversal done).
    """
    n = len(adj)
    s = int(rng.integers(0, n))
    t = int(rng.integers(0, n - 1))
    if t >= s:
        t += 1
    if comp[s] != comp[t]:
        return None
    visited = [False] * n
    dist = [0] * n
    sigma = [0.0] * n
    visited[s] = True
    sigma[s] = 1.0
    q = deque([s])
    dt = -1
    while q:
        u = q.popleft()
        if dt >= 0 and dist[u] >= dt:
            break
        for w in adj[u]:
            if not visited[w]:
                visited[w] = True
                dist[w] = dist[u] + 1
                sigma[w] = sigma[u]
                q.append(w)
                if w == t:
                    dt = dist[w]
            elif dist[w] == dist[u] + 1:
                sigma[w] += sigma[u]
    out = []
    v = t
    while True:
        r = rng.random() * sigma[v]
        chosen = -1
        for p in adj[v]:
            if visited[p] and dist[p] == dist[v] - 1:
                chosen = p
                r -= sigma[p]
                if r < 0.0:
                    break
        v = chosen
        if v == s:
            return out
        out.append(v)
