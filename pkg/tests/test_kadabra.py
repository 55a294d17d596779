import math
import sys
import threading
import time
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chisquare

from conftest import small_graphs
from oracles import (
    adjacency,
    all_shortest_paths,
    check_oracle,
    exact_normalized_bc,
    f_oracle,
    g_oracle,
    omega_oracle,
    reset_reference_sample,
)
from parads.engine import EngineConfig, StateFrame
from parads.generators import complete_graph, cycle_graph, erdos_renyi, path_graph, star_graph
from parads.graph import EmptyGraphError, Graph, connected_components
from parads.kadabra import (
    EPS_CONVERGED,
    OMEGA_REACHED,
    STAMP_PERIOD,
    KadabraParams,
    PathScratch,
    allocate_deltas,
    compute_omega,
    estimate_bc,
    f_bound,
    g_bound,
    kadabra_check,
    sample_path,
    sample_path_between,
)


class TestBounds:
    def test_f_collapses_to_zero(self):
        assert f_bound(0.0, 0.01, 1000, 3000) == 0.0

    def test_f_value(self):
        got = f_bound(0.1, 0.01, 1000, 2000)
        assert got == pytest.approx(float(f_oracle(0.1, 0.01, 1000, 2000)), rel=1e-12)
        assert abs(got - 0.014796) < 1e-6

    def test_g_value(self):
        got = g_bound(0.1, 0.01, 1000, 2000)
        assert got == pytest.approx(float(g_oracle(0.1, 0.01, 1000, 2000)), rel=1e-12)
        assert abs(got - 0.017214) < 1e-6

    def test_stated_digits(self):
        # 0.0147954 at 50 digits: the six-digit example is within one unit of the last place
        assert abs(float(f_oracle(0.1, 0.01, 1000, 2000)) - 0.014796) < 1e-6
        assert round(float(g_oracle(0.1, 0.01, 1000, 2000)), 6) == 0.017214

    @pytest.mark.parametrize("kw", [dict(tau=0), dict(delta=0.0), dict(delta=1.0), dict(b=1.5), dict(b=-0.1)])
    def test_domain(self, kw):
        args = dict(b=0.1, delta=0.01, tau=10)
        args.update(kw)
        for fn in (f_bound, g_bound):
            with pytest.raises(ValueError):
                fn(args["b"], args["delta"], 100, args["tau"])

    def test_monotone_random_draws(self):
        rng = np.random.default_rng(2024)
        k = 10_000
        b1 = rng.random(k)
        b2 = np.minimum(1.0, b1 + rng.random(k) * (1 - b1))
        d = 10.0 ** rng.uniform(-12, -0.01, k)
        omega = rng.integers(1, 10**6, k).astype(float)
        tau1 = rng.integers(1, 10**6, k).astype(float)
        tau2 = tau1 + rng.integers(0, 10**6, k)
        for fn in (f_bound, g_bound):
            lo, hi = fn(b1, d, omega, tau1), fn(b2, d, omega, tau1)
            assert np.all(hi >= lo - 1e-15 * np.abs(lo))
        g1, g2 = g_bound(b1, d, omega, tau1), g_bound(b1, d, omega, tau2)
        assert np.all(g2 <= g1 * (1 + 1e-12))

    @settings(max_examples=300, deadline=None)
    @given(
        st.floats(0, 1), st.floats(0, 1), st.floats(1e-9, 0.99),
        st.integers(1, 10**7), st.integers(1, 10**7), st.integers(0, 10**7),
    )
    def test_monotone_property(self, b1, b2, d, omega, tau, extra):
        lo, hi = sorted((b1, b2))
        assert f_bound(hi, d, omega, tau) >= f_bound(lo, d, omega, tau) - 1e-15
        assert g_bound(hi, d, omega, tau) >= g_bound(lo, d, omega, tau) - 1e-15
        assert g_bound(lo, d, omega, tau + extra) <= g_bound(lo, d, omega, tau) * (1 + 1e-12)


class TestOmega:
    def test_example(self):
        assert compute_omega(3, 0.1, 0.1) == 216 == omega_oracle(4, 0.1, 0.1)

    def test_halving_eps_quadruples(self):
        raw = lambda eps: 0.5 / eps**2 * (1 + 1 + math.log(10))  # noqa: E731
        assert raw(0.05) == pytest.approx(4 * raw(0.1))
        assert compute_omega(3, 0.05, 0.1) == math.ceil(raw(0.05))

    @pytest.mark.parametrize("D", [0, 1, 2, 3, 4, 5, 6, 9, 17, 33, 1000, 12345])
    @pytest.mark.parametrize("eps,delta", [(0.1, 0.1), (0.01, 0.05), (0.37, 0.9)])
    def test_matches_oracle(self, D, eps, delta):
        assert compute_omega(D, eps, delta) == omega_oracle(D + 1, eps, delta)

    def test_clamped_small_diameters(self):
        assert compute_omega(0, 0.1, 0.1) == compute_omega(3, 0.1, 0.1)

    @pytest.mark.parametrize("eps,delta", [(1.0, 0.1), (0.0, 0.1), (0.1, 1.0), (0.1, 0.0)])
    def test_rejects(self, eps, delta):
        with pytest.raises(ValueError):
            compute_omega(3, eps, delta)


class TestDeltas:
    def test_five(self):
        lo, hi = allocate_deltas(5, 0.1)
        assert np.allclose(lo, 0.01) and np.allclose(hi, 0.01)

    @pytest.mark.parametrize("n", [1, 2, 7, 1000])
    def test_sum(self, n):
        lo, hi = allocate_deltas(n, 0.1)
        assert math.fsum(lo) + math.fsum(hi) == pytest.approx(0.1, rel=1e-12)

    def test_single_vertex(self):
        lo, hi = allocate_deltas(1, 0.1)
        assert lo.tolist() == hi.tolist() == [0.05]


def _params(n, eps=0.05, delta=0.1, omega=1000):
    lo, hi = allocate_deltas(n, delta)
    return KadabraParams(eps, delta, omega, lo, hi)


def _frame(data, num):
    f = StateFrame(len(data), 1)
    f.data[:] = data
    f.num = num
    return f


class TestCheck:
    def test_cap(self):
        p = _params(3, omega=50)
        assert kadabra_check(_frame([50, 50, 50], 50), p)
        assert kadabra_check(_frame([50, 0, 0], 60), p)

    def test_empty_frame(self):
        assert not kadabra_check(_frame([0, 0], 0), _params(2))

    def test_f_zero_case(self):
        # omega/num >= 1/3 and every count zero: only g decides
        p = _params(4, eps=0.05, omega=1000)
        for num in (100, 500, 2999):
            assert f_bound(0.0, p.delta_l[0], p.omega, num) == 0.0
            want = g_bound(0.0, p.delta_u[0], p.omega, num) <= p.epsilon
            assert kadabra_check(_frame([0] * 4, num), p) == want
        assert not kadabra_check(_frame([0] * 4, 100), p)

    def test_random_instances_match_oracle(self):
        rng = np.random.default_rng(7)
        outcomes = Counter()
        for _ in range(300):
            n = int(rng.integers(1, 9))
            omega = int(rng.integers(50, 5000))
            num = int(rng.integers(1, omega + 50))
            eps = float(rng.uniform(0.02, 0.5))
            p = _params(n, eps=eps, omega=omega, delta=float(rng.uniform(0.01, 0.5)))
            data = rng.integers(0, num + 1, n)
            got = kadabra_check(_frame(data, num), p)
            assert got == check_oracle(data, num, p.delta_l, p.delta_u, omega, eps)
            outcomes[got] += 1
        assert outcomes[True] > 10 and outcomes[False] > 10


class TestPaths:
    def setup_method(self):
        self.rng = np.random.default_rng(1)

    def test_path3_unique(self):
        g = path_graph(3)
        sc = PathScratch(3)
        for _ in range(100):
            assert sample_path_between(g, 0, 2, sc, self.rng).tolist() == [1]
            assert sample_path_between(g, 0, 1, sc, self.rng).tolist() == []

    def test_cycle4_split(self):
        g = cycle_graph(4)
        sc = PathScratch(4)
        counts = Counter(tuple(sample_path_between(g, 0, 2, sc, self.rng).tolist()) for _ in range(10_000))
        assert set(counts) == {(1,), (3,)}
        assert chisquare([counts[(1,)], counts[(3,)]]).pvalue > 0.01

    def test_disconnected_pair(self):
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        sc = PathScratch(4)
        assert sample_path_between(g, 0, 2, sc, self.rng) is None
        comps = connected_components(g)
        before = sc.traversals
        out = [sample_path(g, comps, sc, self.rng).tolist() for _ in range(200)]
        assert all(o == [] for o in out)
        # only same-component pairs traverse
        assert 0 < sc.traversals - before < 200

    def test_excludes_endpoints(self):
        g = erdos_renyi(30, 0.15, seed=2)
        sc = PathScratch(30)
        adj = adjacency(g)
        for _ in range(500):
            s, t = (int(x) for x in self.rng.choice(30, 2, replace=False))
            got = sample_path_between(g, s, t, sc, self.rng)
            if got is None:
                continue
            path = (s, *reversed(got.tolist()), t)
            assert s not in got and t not in got
            assert all(b in adj[a] for a, b in zip(path, path[1:]))
            assert path in set(all_shortest_paths(adj, s, t))

    def test_same_endpoint_rejected(self):
        with pytest.raises(ValueError):
            sample_path_between(path_graph(3), 1, 1, PathScratch(3), self.rng)


def _uniformity_cases():
    for name, g in small_graphs().items():
        adj = adjacency(g)
        for s in range(g.num_vertices):
            for t in range(g.num_vertices):
                if s != t and len(all_shortest_paths(adj, s, t)) >= 2:
                    yield name, g, s, t


def path_uniformity_pvalues(draws=10_000, seed=0):
    """Chi-square p-value of path frequencies for every pair with two or more shortest paths."""
    rng = np.random.default_rng(seed)
    out = []
    for name, g, s, t in _uniformity_cases():
        adj = adjacency(g)
        expected = all_shortest_paths(adj, s, t)
        sc = PathScratch(g.num_vertices)
        seen = Counter(
            (s, *reversed(sample_path_between(g, s, t, sc, rng).tolist()), t) for _ in range(draws)
        )
        assert set(seen) <= set(expected)
        out.append((name, s, t, chisquare([seen[p] for p in expected]).pvalue))
    return out


@pytest.mark.slow
def test_path_uniformity_small_graphs():
    results = path_uniformity_pvalues(draws=10_000)
    assert len(results) > 30
    # independent tests at level 0.01: allow the expected handful of rejections
    bad = [r for r in results if r[3] <= 0.01]
    assert len(bad) <= max(1, int(0.03 * len(results))), bad


def stamp_equivalence(traversals=1000, seed=5):
    """Production sampler vs a fresh-visited-array reference on identical rng streams.

    Returns the number of traversals compared and the number of full stamp resets seen.
    """
    g = erdos_renyi(40, 0.08, seed=9)
    comps = connected_components(g)
    adj = adjacency(g)
    label = comps.label.tolist()
    a, b = np.random.default_rng(seed), np.random.default_rng(seed)
    sc = PathScratch(g.num_vertices)
    resets = 0
    while sc.traversals < traversals:
        before = sc.traversals
        got = sample_path(g, comps, sc, a).tolist()
        ref = reset_reference_sample(adj, label, b)
        assert got == (ref or [])
        if sc.traversals > before and before % STAMP_PERIOD == 0:
            resets += 1
    assert a.random() == b.random()
    return sc.traversals, resets


def test_stamp_equivalence():
    done, resets = stamp_equivalence()
    assert done >= 1000 and resets >= 2


def test_stamp_storage_is_seven_bit():
    sc = PathScratch(10)
    assert sc.stamp.dtype == np.uint8
    g = cycle_graph(10)
    rng = np.random.default_rng(0)
    for _ in range(300):
        sample_path_between(g, 0, 5, sc, rng)
        assert sc.stamp.max() <= 0x80


@pytest.mark.parametrize("name", ["c6", "k23", "two_parts", "grid2x3"])
def test_unbiased_at_fixed_tau(name):
    g = small_graphs()[name]
    comps = connected_components(g)
    exact = exact_normalized_bc(g)
    sc = PathScratch(g.num_vertices)
    rng = np.random.default_rng(17)
    tau = 100_000
    counts = np.zeros(g.num_vertices)
    for _ in range(tau):
        counts[sample_path(g, comps, sc, rng)] += 1
    est = counts / tau
    se = np.sqrt(np.maximum(exact * (1 - exact), 1e-12) / tau)
    assert np.all(np.abs(est - exact) <= 3 * se + 1e-12), (est, exact)


def test_kernel_releases_gil(monkeypatch):
    n = 1_000_000
    g = path_graph(n)
    sc = PathScratch(n)
    rng = np.random.default_rng(0)
    sample_path_between(path_graph(3), 0, 2, PathScratch(3), rng)  # compile first
    # with a long switch interval a GIL-holding call would starve the other thread
    monkeypatch.setattr(sys, "getswitchinterval", sys.getswitchinterval)
    old = sys.getswitchinterval()
    sys.setswitchinterval(5.0)
    ticks = []
    started = threading.Event()
    done = threading.Event()

    def heartbeat():
        started.set()
        while not done.is_set():
            ticks.append(time.perf_counter())
            time.sleep(0)

    th = threading.Thread(target=heartbeat)
    try:
        th.start()
        started.wait()
        t0 = time.perf_counter()
        got = sample_path_between(g, 0, n - 1, sc, rng)
        t1 = time.perf_counter()
    finally:
        done.set()
        th.join()
        sys.setswitchinterval(old)
    assert len(got) == n - 2
    assert any(t0 < t < t1 for t in ticks)


class TestEstimate:
    def test_path3(self):
        res = estimate_bc(path_graph(3), 0.05, 0.1, EngineConfig(threads=1, variant="sequential"))
        assert abs(res.scores[1] - 1 / 3) <= 0.05
        assert res.scores[0] == res.scores[2] == 0.0
        assert res.reason in (EPS_CONVERGED, OMEGA_REACHED)

    def test_star_center(self):
        res = estimate_bc(star_graph(5), 0.05, 0.1, EngineConfig(threads=2, variant="local"))
        assert exact_normalized_bc(star_graph(5))[0] == pytest.approx(0.6)
        assert abs(res.scores[0] - 0.6) <= 0.05

    def test_complete_graph_zero(self):
        res = estimate_bc(complete_graph(6), 0.1, 0.1, EngineConfig(threads=2, variant="indexed"))
        assert res.tau > 0 and np.all(res.scores == 0)

    def test_single_vertex(self):
        res = estimate_bc(Graph.from_edges(1, []), 0.05, 0.1, EngineConfig(threads=1))
        assert res.scores.tolist() == [0.0] and res.tau == 0

    def test_empty_rejected(self):
        with pytest.raises(EmptyGraphError):
            estimate_bc(Graph.from_edges(0, []), 0.05, 0.1)

    def test_scores_are_counts_over_tau(self):
        res = estimate_bc(erdos_renyi(60, 0.08, seed=4), 0.1, 0.1, EngineConfig(threads=2, variant="shared"))
        assert np.array_equal(res.scores, res.counts / res.tau)
        assert np.all((0 <= res.scores) & (res.scores <= 1))

    def test_omega_cap_reason(self):
        res = estimate_bc(star_graph(5), 0.5, 0.5, EngineConfig(threads=1, variant="sequential", check_interval=10**6))
        assert res.reason == OMEGA_REACHED and res.tau >= res.omega

    @pytest.mark.parametrize("eps,delta", [(0.0, 0.1), (1.0, 0.1), (0.1, 0.0)])
    def test_bad_args(self, eps, delta):
        with pytest.raises(ValueError):
            estimate_bc(path_graph(3), eps, delta)
