from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .. import engine
from ..engine import EngineConfig, EngineHooks, EngineResult, StateFrame
from ..graph import ComponentLabels, EmptyGraphError, Graph, connected_components, diameter_upper_bound
from .bounds import OMEGA_C, KadabraParams, allocate_deltas, compute_omega, kadabra_check
from .paths import PathScratch, sample_path

EPS_CONVERGED = "eps_converged"
OMEGA_REACHED = "omega_reached"


class KadabraSampler:
    """Adapter exposing KADABRA to the engine's sampler interface."""

    def __init__(self, g: Graph, components: ComponentLabels, params: KadabraParams):
        self.g = g
        self.components = components
        self.params = params
        self.n = g.num_vertices

    def make_scratch(self) -> PathScratch:
        return PathScratch(self.n)

    def sample(self, scratch: PathScratch, rng: np.random.Generator) -> np.ndarray:
        return sample_path(self.g, self.components, scratch, rng)

    def check_for_stop(self, frame: StateFrame) -> bool:
        return kadabra_check(frame, self.params)


@dataclass
class Preprocessed:
    components: ComponentLabels
    diameter_bound: int
    params: KadabraParams


def preprocess(g: Graph, epsilon: float, delta: float, c: float = OMEGA_C) -> Preprocessed:
    comps = connected_components(g)
    dub = diameter_upper_bound(g, comps)
    omega = compute_omega(dub, epsilon, delta, c)
    dl, du = allocate_deltas(g.num_vertices, delta)
    return Preprocessed(comps, dub, KadabraParams(epsilon, delta, omega, dl, du, c))


@dataclass
class BcResult:
    scores: np.ndarray
    tau: int
    reason: str
    omega: int
    diameter_bound: int
    preprocess_seconds: float
    ads_seconds: float
    engine: EngineResult | None = None

    @property
    def counts(self) -> np.ndarray:
        return self.engine.frame.data if self.engine else np.zeros(len(self.scores), dtype=np.int64)


def estimate_bc(
    g: Graph,
    epsilon: float,
    delta: float,
    config: EngineConfig | None = None,
    hooks: EngineHooks | None = None,
    sampler_factory=KadabraSampler,
) -> BcResult:
    """Approximate normalized betweenness (over ordered pairs) within ``epsilon`` w.p. ``1 - delta``."""
    if g.num_vertices == 0:
        raise EmptyGraphError("graph has no vertices")
    if not 0 < epsilon < 1 or not 0 < delta < 1:
        raise ValueError("epsilon and delta must lie in (0, 1)")
    config = config or EngineConfig()
    t0 = time.perf_counter()
    pre = preprocess(g, epsilon, delta)
    t1 = time.perf_counter()
    if g.num_vertices == 1:
        return BcResult(np.zeros(1), 0, EPS_CONVERGED, pre.params.omega, pre.diameter_bound, t1 - t0, 0.0)
    sampler = sampler_factory(g, pre.components, pre.params)
    res = engine.run(sampler, config, hooks)
    t2 = time.perf_counter()
    frame = res.frame
    reason = OMEGA_REACHED if frame.num >= pre.params.omega else EPS_CONVERGED
    return BcResult(frame.data / frame.num, frame.num, reason, pre.params.omega, pre.diameter_bound, t1 - t0, t2 - t1, res)
