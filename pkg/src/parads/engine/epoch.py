"""Epoch-based engine: local-frame and shared-frame variants.

Each thread samples into the frame of its current epoch. Thread 0 starts a
check cycle by bumping ``epoch_to_read``; every thread that sees the bump
publishes its finished frame to ``sf_fin[t]`` with a release store and moves
on to a fresh frame. Thread 0 folds the frames only once all ``T`` slots show
the requested epoch, so the checked state is always a complete set of
samples.
"""

from __future__ import annotations

import threading

from .config import EngineConfig, Sampler, check_budget, shared_frame_target, thread_rng
from .frames import EngineControl, StateFrame, add_sample, fold
from .hooks import EngineHooks
from .result import EngineResult


class LocalPool:
    """One pair of frames per thread; even epochs use slot 0, odd epochs slot 1.

    The owner resets a slot when it enters the epoch that reuses it. By then
    thread 0 has finished with the slot's previous epoch: a thread can only
    enter epoch ``e + 1`` after thread 0 requested epoch ``e``, which happens
    after epoch ``e - 1`` was accumulated.
    """

    shared = False

    def __init__(self, n: int, threads: int):
        self.pairs = [(StateFrame(n), StateFrame(n)) for _ in range(threads)]

    @staticmethod
    def slot(epoch: int) -> int:
        return epoch % 2

    def frame_for(self, t: int, epoch: int) -> StateFrame:
        f = self.pairs[t][self.slot(epoch)]
        f.reset(epoch)
        return f

    def lock_for(self, t: int):
        return None

    def recycle(self, epoch: int) -> None:
        pass


class SharedPool:
    """``F`` frame pairs; thread ``t`` writes to pair ``t mod F`` under its lock.

    Thread 0 resets a group's frame right after accumulating it, relabelling
    it two epochs ahead.
    """

    shared = True

    def __init__(self, n: int, threads: int, groups: int):
        self.groups = groups
        self.pairs = [(StateFrame(n, epoch=2), StateFrame(n, epoch=1)) for _ in range(groups)]
        self.locks = [threading.Lock() for _ in range(groups)]

    def frame_for(self, t: int, epoch: int) -> StateFrame:
        f = self.pairs[shared_frame_target(t, self.groups)][epoch % 2]
        assert f.epoch == epoch, "shared frame not reclaimed in time"
        return f

    def lock_for(self, t: int):
        return self.locks[shared_frame_target(t, self.groups)]

    def recycle(self, epoch: int) -> None:
        for pair in self.pairs:
            pair[epoch % 2].reset(epoch + 2)


def advance_epoch(t: int, e_sam: int, frame: StateFrame, ctl: EngineControl, pool) -> tuple[int, StateFrame]:
    """Publish ``frame`` (epoch ``e_sam``) and return the next epoch and its frame.

    There is nothing to reclaim on the first transition since epoch 0 has no
    frame; later reclamation is done by the pool when the slot is reused.
    """
    ctl.sf_fin[t].store_release(frame)
    e_sam += 1
    return e_sam, pool.frame_for(t, e_sam)


class FrameChecker:
    """Thread 0's half of the protocol.

    ``accumulated`` is the running fold of every checked epoch; the stopping
    condition is always evaluated on it.
    """

    def __init__(self, ctl: EngineControl, sampler: Sampler, budget: int, pool=None, hooks: EngineHooks | None = None):
        self.ctl = ctl
        self.sampler = sampler
        self.budget = budget
        self.pool = pool
        self.hooks = hooks
        self.e_chk = 0
        self.in_check = False
        self.pending = 0
        self.cycles = 0
        self.accumulated = StateFrame(sampler.n, epoch=0)
        self.result: StateFrame | None = None

    def initiate(self) -> None:
        self.e_chk += 1
        self.ctl.epoch_to_read.store_relaxed(self.e_chk)
        self.in_check = True
        self.pending = 0

    def step(self) -> bool | None:
        """One call of the check procedure; returns the stop decision or ``None``."""
        if not self.in_check:
            if self.pending < self.budget:
                return None
            self.initiate()
        frames = []
        for slot in self.ctl.sf_fin:
            f = slot.load_acquire()
            if f is None or f.epoch != self.e_chk:
                return None
            frames.append(f)
        return self.collect(frames)

    def collect(self, frames: list[StateFrame]) -> bool:
        seen = set()
        for f in frames:
            # shared-frame groups are published by several threads
            if id(f) in seen:
                continue
            seen.add(id(f))
            fold(self.accumulated, f)
        self.accumulated.epoch = self.e_chk
        if self.pool is not None:
            self.pool.recycle(self.e_chk)
        self.cycles += 1
        if self.hooks:
            self.hooks.on_check(self.e_chk, self.accumulated)
        stop = bool(self.sampler.check_for_stop(self.accumulated))
        if stop:
            self.result = self.accumulated.copy()
            self.ctl.stop.store_relaxed(True)
        self.in_check = False
        return stop


def run_epoch(
    sampler: Sampler,
    config: EngineConfig,
    hooks: EngineHooks | None = None,
    *,
    _publish_early: bool = False,
) -> EngineResult:
    """Run the local-frame or shared-frame engine with ``config.threads`` threads.

    ``_publish_early`` is a deliberately broken build for mutation tests: the
    thread publishes its frame and then keeps writing one more sample into it.
    """
    if config.variant == "indexed":
        from .indexed import run_indexed

        return run_indexed(sampler, config, hooks)
    if config.variant not in ("local", "shared"):
        raise ValueError(f"run_epoch does not handle variant {config.variant!r}")
    T = config.threads
    n = sampler.n
    ctl = EngineControl(T)
    if config.variant == "local":
        pool = LocalPool(n, T)
    else:
        pool = SharedPool(n, T, config.frames)
    checker = FrameChecker(
        ctl,
        sampler,
        check_budget(T, config.check_interval, config.xi),
        pool=pool if pool.shared else None,
        hooks=hooks,
    )
    counts = [0] * T
    errors: list[BaseException] = []
    if hooks:
        hooks.on_start(config.variant, T, n)

    def worker(t: int) -> None:
        try:
            _loop(t)
        except BaseException as exc:  # noqa: BLE001 - re-raised by the caller
            errors.append(exc)
            ctl.stop.store_relaxed(True)

    def _loop(t: int) -> None:
        rng = thread_rng(config.base_seed, t)
        scratch = sampler.make_scratch()
        lock = pool.lock_for(t)
        e_sam = 1
        f_sam = pool.frame_for(t, e_sam)
        stop = ctl.stop
        epoch_to_read = ctl.epoch_to_read
        count = 0
        while not stop.load_relaxed():
            idx = sampler.sample(scratch, rng)
            if lock is None:
                add_sample(f_sam, idx)
            else:
                with lock:
                    add_sample(f_sam, idx)
            count += 1
            if hooks:
                hooks.on_sample(t, e_sam, idx)
                hooks.delay(t, "sample")
            if epoch_to_read.load_relaxed() == e_sam:
                if hooks:
                    hooks.delay(t, "pre_publish")
                if _publish_early:
                    ctl.sf_fin[t].store_release(f_sam)
                    hooks.delay(t, "post_publish")
                    idx = sampler.sample(scratch, rng)
                    add_sample(f_sam, idx)
                    hooks.on_sample(t, e_sam, idx)
                    count += 1
                e_sam, f_sam = advance_epoch(t, e_sam, f_sam, ctl, pool)
                if hooks:
                    hooks.delay(t, "post_publish")
            if t == 0:
                checker.pending += 1
                checker.step()
        counts[t] = count

    threads = [threading.Thread(target=worker, args=(t,), daemon=True) for t in range(1, T)]
    for th in threads:
        th.start()
    worker(0)
    for th in threads:
        th.join()
    if errors:
        raise errors[0]
    return EngineResult(checker.result, config.variant, T, counts, checker.cycles, checker.e_chk)
