"""State frames, shared control cells, and the accumulation operator."""

from __future__ import annotations

import threading

import numpy as np


class StateFrame:
    """Samples collected during one epoch: ``num`` samples folded into ``data``."""

    __slots__ = ("epoch", "num", "data")

    def __init__(self, n: int, epoch: int = 0):
        self.epoch = epoch
        self.num = 0
        self.data = np.zeros(n, dtype=np.int64)

    def reset(self, epoch: int) -> None:
        self.data.fill(0)
        self.num = 0
        self.epoch = epoch

    def copy(self) -> "StateFrame":
        out = StateFrame.__new__(StateFrame)
        out.epoch = self.epoch
        out.num = self.num
        out.data = self.data.copy()
        return out

    def __repr__(self):
        return f"StateFrame(epoch={self.epoch}, num={self.num}, n={len(self.data)})"


def add_sample(frame: StateFrame, increments: np.ndarray) -> None:
    """Fold one sample into ``frame``; ``increments`` holds distinct indices, each +1."""
    frame.data[increments] += 1
    frame.num += 1


def fold(dst: StateFrame, src: StateFrame) -> None:
    """The accumulation operator: elementwise addition, associative and commutative."""
    np.add(dst.data, src.data, out=dst.data)
    dst.num += src.num


class Cell:
    """A word-sized shared variable.

    The method names document the memory ordering each access site needs.
    Under CPython every attribute load/store of a reference is atomic and
    sequentially consistent, so all four map to plain accesses; porting the
    engine to a weaker model only requires changing this class.
    """

    __slots__ = ("_value",)

    def __init__(self, value=None):
        self._value = value

    def load_relaxed(self):
        return self._value

    def load_acquire(self):
        return self._value

    def store_relaxed(self, value) -> None:
        self._value = value

    def store_release(self, value) -> None:
        self._value = value


class AtomicCounter:
    """Fetch-and-add counter."""

    def __init__(self, value: int = 0):
        self._value = value
        self._lock = threading.Lock()

    def fetch_add(self, delta: int = 1) -> int:
        with self._lock:
            old = self._value
            self._value = old + delta
            return old

    @property
    def value(self) -> int:
        return self._value


class EngineControl:
    """Shared state of the epoch engine: ``stop``, ``epoch_to_read``, ``sf_fin[T]``."""

    def __init__(self, num_threads: int):
        self.stop = Cell(False)
        self.epoch_to_read = Cell(0)
        self.sf_fin = [Cell(None) for _ in range(num_threads)]

    @property
    def num_threads(self) -> int:
        return len(self.sf_fin)
