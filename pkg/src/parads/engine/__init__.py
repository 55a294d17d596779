"""Generic adaptive-sampling runtime."""

from .baseline import run_barrier, run_sequential
from .config import (
    EPOCH_VARIANTS,
    VARIANTS,
    EngineConfig,
    Sampler,
    check_budget,
    indexed_frame_index,
    reseed,
    shared_frame_target,
    thread_rng,
)
from .epoch import FrameChecker, LocalPool, SharedPool, advance_epoch, run_epoch
from .frames import AtomicCounter, Cell, EngineControl, StateFrame, add_sample, fold
from .hooks import EngineHooks
from .indexed import Reservation, reserve_indices, run_indexed, sequence_index
from .result import EngineResult


def run(sampler: Sampler, config: EngineConfig, hooks: EngineHooks | None = None) -> EngineResult:
    """Dispatch to the engine variant named by ``config.variant``."""
    if config.variant == "sequential":
        return run_sequential(sampler, config, hooks)
    if config.variant == "barrier":
        return run_barrier(sampler, config, hooks)
    if config.variant == "indexed":
        return run_indexed(sampler, config, hooks)
    return run_epoch(sampler, config, hooks)


__all__ = [
    "AtomicCounter",
    "Cell",
    "EPOCH_VARIANTS",
    "EngineConfig",
    "EngineControl",
    "EngineHooks",
    "EngineResult",
    "FrameChecker",
    "LocalPool",
    "Reservation",
    "Sampler",
    "SharedPool",
    "StateFrame",
    "VARIANTS",
    "add_sample",
    "advance_epoch",
    "check_budget",
    "fold",
    "indexed_frame_index",
    "reseed",
    "reserve_indices",
    "run",
    "run_barrier",
    "run_epoch",
    "run_indexed",
    "run_sequential",
    "sequence_index",
    "shared_frame_target",
    "thread_rng",
]
