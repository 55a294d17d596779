"""KADABRA's stopping condition.

With probability at least ``1 - delta_l(v)`` the true centrality is above
``b~(v) - f`` and with probability at least ``1 - delta_u(v)`` it is below
``b~(v) + g``; sampling may stop once both widths are at most ``epsilon``
for every vertex. Logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..engine.frames import StateFrame

OMEGA_C = 0.5


def _check_common(b_tilde, delta, tau):
    if np.any(np.asarray(tau) < 1):
        raise ValueError("tau must be >= 1")
    d = np.asarray(delta)
    if np.any(d <= 0) or np.any(d >= 1):
        raise ValueError("delta must lie in (0, 1)")
    b = np.asarray(b_tilde)
    if np.any(b < 0) or np.any(b > 1):
        raise ValueError("b_tilde must lie in [0, 1]")


def f_bound(b_tilde, delta_l, omega, tau):
    """Lower confidence width; non-decreasing in ``b_tilde``."""
    _check_common(b_tilde, delta_l, tau)
    log_d = np.log(1.0 / np.asarray(delta_l, dtype=np.float64))
    a = 1.0 / 3.0 - omega / tau
    return log_d / tau * (a + np.sqrt(a * a + 2.0 * np.asarray(b_tilde) * omega / log_d))


def g_bound(b_tilde, delta_u, omega, tau):
    """Upper confidence width; non-decreasing in ``b_tilde``, non-increasing in ``tau``."""
    _check_common(b_tilde, delta_u, tau)
    log_d = np.log(1.0 / np.asarray(delta_u, dtype=np.float64))
    a = 1.0 / 3.0 + omega / tau
    return log_d / tau * (a + np.sqrt(a * a + 2.0 * np.asarray(b_tilde) * omega / log_d))


def compute_omega(diameter_bound: int, epsilon: float, delta: float, c: float = OMEGA_C) -> int:
    """Maximum number of samples from a vertex-diameter bound of ``diameter_bound + 1``."""
    if diameter_bound < 0:
        raise ValueError("diameter bound must be >= 0")
    if not 0 < epsilon < 1 or not 0 < delta < 1:
        raise ValueError("epsilon and delta must lie in (0, 1)")
    vd = diameter_bound + 1
    floor_log2 = max(vd - 2, 2).bit_length() - 1
    return math.ceil(c / epsilon**2 * (floor_log2 + 1 + math.log(1.0 / delta)))


def allocate_deltas(n: int, delta: float) -> tuple[np.ndarray, np.ndarray]:
    """Split ``delta`` evenly: ``delta / (2n)`` per vertex and side."""
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    per = delta / (2 * n)
    return np.full(n, per), np.full(n, per)


@dataclass(frozen=True)
class KadabraParams:
    epsilon: float
    delta: float
    omega: int
    delta_l: np.ndarray
    delta_u: np.ndarray
    c: float = OMEGA_C

    def __post_init__(self):
        if not 0 < self.epsilon < 1 or not 0 < self.delta < 1:
            raise ValueError("epsilon and delta must lie in (0, 1)")
        if self.omega < 1:
            raise ValueError("omega must be >= 1")
        if self.delta_l.sum() + self.delta_u.sum() > self.delta * (1 + 1e-12):
            raise ValueError("per-vertex deltas exceed delta")


def kadabra_check(frame: StateFrame, params: KadabraParams) -> bool:
    """True once ``frame.num`` reaches omega or every vertex's widths are <= epsilon.

    An empty frame never stops.
    """
    tau = frame.num
    if tau == 0:
        return False
    if tau >= params.omega:
        return True
    b = frame.data / tau
    eps = params.epsilon
    if not np.all(g_bound(b, params.delta_u, params.omega, tau) <= eps):
        return False
    return bool(np.all(f_bound(b, params.delta_l, params.omega, tau) <= eps))
