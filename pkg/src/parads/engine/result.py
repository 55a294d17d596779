from __future__ import annotations

from dataclasses import dataclass, field

from .frames import StateFrame


@dataclass
class EngineResult:
    frame: StateFrame
    variant: str
    threads: int
    per_thread_samples: list[int]
    check_cycles: int
    # epoch of the checked frame (indexed: number of frames in the checked prefix)
    stop_epoch: int
    queue_max: list[int] = field(default_factory=list)
    queue_mean: list[float] = field(default_factory=list)

    @property
    def tau(self) -> int:
        return self.frame.num

    @property
    def total_samples(self) -> int:
        return sum(self.per_thread_samples)
