from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Any, Protocol

import numpy as np

from .frames import StateFrame

VARIANTS = ("sequential", "barrier", "local", "shared", "indexed")
EPOCH_VARIANTS = ("local", "shared", "indexed")

# Empirically tuned exponent for thread 0's check budget at 32 threads.
DEFAULT_XI = 1.33
DEFAULT_CHECK_INTERVAL = 1000


class Sampler(Protocol):
    """What the engine needs from an adaptive sampling algorithm."""

    n: int

    def make_scratch(self) -> Any: ...

    def sample(self, scratch: Any, rng: np.random.Generator) -> np.ndarray:
        """Draw one sample; return the distinct state indices it increments by one."""

    def check_for_stop(self, frame: StateFrame) -> bool: ...


@dataclass
class EngineConfig:
    threads: int = field(default_factory=lambda: os.cpu_count() or 1)
    variant: str = "local"
    frames: int = 2
    check_interval: int = DEFAULT_CHECK_INTERVAL
    xi: float = DEFAULT_XI
    samples_per_frame: int | None = None
    reservation_a: int = 1
    bounded_memory: bool = False
    base_seed: int = 0
    queue_warn: int = 64

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; choose from {VARIANTS}")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.variant == "sequential" and self.threads != 1:
            raise ValueError("sequential variant runs with exactly one thread")
        if self.variant == "shared" and not 1 <= self.frames <= self.threads:
            raise ValueError("frames (F) must satisfy 1 <= F <= threads")
        if self.check_interval < 1:
            raise ValueError("check interval N must be >= 1")
        if not self.xi > 0:
            raise ValueError("xi must be > 0")
        if self.samples_per_frame is None:
            self.samples_per_frame = check_budget(1, self.check_interval, self.xi)
        if self.samples_per_frame < 1:
            raise ValueError("samples_per_frame must be >= 1")
        if self.reservation_a < 1:
            raise ValueError("reservation_a must be >= 1")
        if not 0 <= self.base_seed < 2**64:
            raise ValueError("base_seed must be a 64-bit unsigned integer")


def check_budget(threads: int, check_interval: int, xi: float) -> int:
    """Samples thread 0 collects between check initiations: ``N / T**xi``, at least 1."""
    if threads < 1 or check_interval < 1 or not xi > 0:
        raise ValueError("need threads >= 1, check_interval >= 1, xi > 0")
    return max(1, round(check_interval / threads**xi))


def shared_frame_target(t: int, frames: int) -> int:
    return t % frames


def indexed_frame_index(epoch: int, t: int, threads: int) -> int:
    """Index of the frame thread ``t`` fills during ``epoch``."""
    return epoch * threads + t


def reseed(base_seed: int, frame_index: int) -> np.random.Generator:
    """Random stream owned by one frame; a pure function of its two arguments."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(base_seed, spawn_key=(0, frame_index))))


def thread_rng(base_seed: int, t: int) -> np.random.Generator:
    """Per-thread stream for the non-deterministic variants."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(base_seed, spawn_key=(1, t))))

