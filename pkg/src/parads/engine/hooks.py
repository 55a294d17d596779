"""Instrumentation points the engine calls when a hooks object is supplied.

Every engine variant tags a sample with the "epoch" of the frame it went to
and reports each checked frame with the largest epoch it covers, so a check
record with epoch ``e`` must equal the fold of all sample events tagged
``<= e``. Sample events are recorded by the sampling thread itself, before the
frame that holds them is published.
"""

from __future__ import annotations

import numpy as np

from .frames import StateFrame


class EngineHooks:
    """No-op base; subclass and override what you need."""

    def on_start(self, variant: str, threads: int, n: int) -> None:
        pass

    def on_sample(self, t: int, epoch: int, increments: np.ndarray) -> None:
        pass

    def on_check(self, epoch: int, frame: StateFrame) -> None:
        pass

    def on_queue_depth(self, t: int, depth: int) -> None:
        pass

    def delay(self, t: int, point: str) -> None:
        """Called at ``"sample"``, ``"pre_publish"`` and ``"post_publish"``."""
