"""Indexed-frame engine: deterministic results for any thread count.

Frames are identified by a global index. Every frame holds exactly
``samples_per_frame`` samples drawn from a stream seeded by its index alone,
and thread 0 folds frames strictly in index order, evaluating the stopping
condition after each one. The checked prefixes, and therefore the result,
do not depend on how many threads produced them or when.
"""

from __future__ import annotations

import threading
import warnings
from collections import deque

from .config import EngineConfig, Sampler, indexed_frame_index, reseed
from .frames import AtomicCounter, EngineControl, StateFrame, add_sample, fold
from .hooks import EngineHooks
from .result import EngineResult


def sequence_index(epoch: int, t: int, threads: int) -> int:
    """Zero-based position of the frame in the global sequence.

    The frame index of epoch 1 starts at ``T``; shifting by one epoch makes
    the sequence start at 0 for every ``T``, which is what keeps the streams
    independent of the thread count.
    """
    return indexed_frame_index(epoch, t, threads) - threads


class Reservation:
    """Claims of ``a + 1`` frame indices ``(i, i + T, ..., i + aT)``.

    Claims are handed out by increasing base index ``i``; bases inside an
    already claimed block are skipped.
    """

    def __init__(self, threads: int, a: int):
        self.threads = threads
        self.a = a
        self._counter = AtomicCounter()

    def claim(self) -> list[int]:
        c = self._counter.fetch_add(1)
        T = self.threads
        block, offset = divmod(c, T)
        base = block * T * (self.a + 1) + offset
        return [base + k * T for k in range(self.a + 1)]


def reserve_indices(reservation: Reservation) -> list[int]:
    return reservation.claim()


def _own_indices(t: int, threads: int):
    epoch = 1
    while True:
        yield sequence_index(epoch, t, threads)
        epoch += 1


def _reserved_indices(reservation: Reservation):
    while True:
        yield from reservation.claim()


class _PrefixChecker:
    def __init__(self, ctl, sampler, outboxes, free, threads, samples_per_frame, hooks, by_owner):
        self.ctl = ctl
        self.sampler = sampler
        self.outboxes = outboxes
        self.free = free
        self.threads = threads
        self.spf = samples_per_frame
        self.hooks = hooks
        self.by_owner = by_owner
        self.next_index = 0
        self.consumed = [0] * threads
        self.accumulated = StateFrame(sampler.n, epoch=0)
        self.result = None

    def _take(self, k):
        if self.by_owner:
            owner = k % self.threads
            return owner, self.outboxes[owner].pop(k, None)
        for owner, box in enumerate(self.outboxes):
            f = box.pop(k, None)
            if f is not None:
                return owner, f
        return None, None

    def step(self) -> bool | None:
        while True:
            owner, f = self._take(self.next_index)
            if f is None:
                return None
            fold(self.accumulated, f)
            self.free[owner].append(f)
            self.consumed[owner] += 1
            self.next_index += 1
            self.accumulated.epoch = self.next_index
            if self.hooks:
                self.hooks.on_check(self.next_index, self.accumulated)
            if self.sampler.check_for_stop(self.accumulated):
                self.result = self.accumulated.copy()
                self.ctl.stop.store_relaxed(True)
                return True


def run_indexed(sampler: Sampler, config: EngineConfig, hooks: EngineHooks | None = None) -> EngineResult:
    T = config.threads
    S = config.samples_per_frame
    n = sampler.n
    ctl = EngineControl(T)
    # outboxes[t]: finished frames of thread t not yet folded, keyed by index
    outboxes: list[dict[int, StateFrame]] = [{} for _ in range(T)]
    free: list[deque] = [deque() for _ in range(T)]
    reservation = Reservation(T, config.reservation_a) if config.bounded_memory else None
    checker = _PrefixChecker(ctl, sampler, outboxes, free, T, S, hooks, by_owner=reservation is None)
    counts = [0] * T
    produced = [0] * T
    depth_max = [0] * T
    depth_sum = [0] * T
    errors: list[BaseException] = []
    warned = []
    if hooks:
        hooks.on_start("indexed", T, n)

    def loop(t: int) -> None:
        scratch = sampler.make_scratch()
        indices = _own_indices(t, T) if reservation is None else _reserved_indices(reservation)
        stop = ctl.stop
        count = 0
        for k in indices:
            if stop.load_relaxed():
                break
            rng = reseed(config.base_seed, k)
            f = free[t].popleft() if free[t] else StateFrame(n)
            f.reset(k + 1)
            for _ in range(S):
                if stop.load_relaxed():
                    break
                idx = sampler.sample(scratch, rng)
                add_sample(f, idx)
                count += 1
                if hooks:
                    hooks.on_sample(t, k + 1, idx)
                    hooks.delay(t, "sample")
                if t == 0:
                    checker.step()
            else:
                if hooks:
                    hooks.delay(t, "pre_publish")
                outboxes[t][k] = f  # release: the frame is complete before it becomes visible
                produced[t] += 1
                depth = produced[t] - checker.consumed[t]
                depth_max[t] = max(depth_max[t], depth)
                depth_sum[t] += depth
                if hooks:
                    hooks.on_queue_depth(t, depth)
                    hooks.delay(t, "post_publish")
                if depth > config.queue_warn and not warned:
                    warned.append(t)
                    warnings.warn(
                        f"thread {t} buffers {depth} finished frames (high-water mark {config.queue_warn})",
                        RuntimeWarning,
                        stacklevel=2,
                    )
                if t == 0:
                    checker.step()
                continue
            break
        counts[t] = count

    def worker(t: int) -> None:
        try:
            loop(t)
        except BaseException as exc:  # noqa: BLE001 - re-raised by the caller
            errors.append(exc)
            ctl.stop.store_relaxed(True)

    threads = [threading.Thread(target=worker, args=(t,), daemon=True) for t in range(1, T)]
    for th in threads:
        th.start()
    worker(0)
    for th in threads:
        th.join()
    if errors:
        raise errors[0]
    means = [depth_sum[t] / produced[t] if produced[t] else 0.0 for t in range(T)]
    return EngineResult(checker.result, "indexed", T, counts, checker.next_index, checker.next_index, depth_max, means)
