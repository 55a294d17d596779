"""Betweenness-centrality approximation by adaptive shortest-path sampling."""

from .bounds import KadabraParams, allocate_deltas, compute_omega, f_bound, g_bound, kadabra_check
from .estimator import (
    EPS_CONVERGED,
    OMEGA_REACHED,
    BcResult,
    KadabraSampler,
    Preprocessed,
    estimate_bc,
    preprocess,
)
from .paths import STAMP_PERIOD, PathScratch, sample_path, sample_path_between

__all__ = [
    "BcResult",
    "EPS_CONVERGED",
    "KadabraParams",
    "KadabraSampler",
    "OMEGA_REACHED",
    "PathScratch",
    "Preprocessed",
    "STAMP_PERIOD",
    "allocate_deltas",
    "compute_omega",
    "estimate_bc",
    "f_bound",
    "g_bound",
    "kadabra_check",
    "preprocess",
    "sample_path",
    "sample_path_between",
]
