"""Reference loops: the plain sequential loop and the barrier-batch baseline."""

from __future__ import annotations

import threading

from .config import EngineConfig, Sampler, thread_rng
from .frames import StateFrame, add_sample
from .hooks import EngineHooks
from .result import EngineResult


def run_sequential(sampler: Sampler, config: EngineConfig, hooks: EngineHooks | None = None) -> EngineResult:
    """Sample until ``check_for_stop`` holds, checking every ``N`` samples (including 0)."""
    if config.threads != 1:
        raise ValueError("run_sequential needs threads == 1")
    N = config.check_interval
    rng = thread_rng(config.base_seed, 0)
    scratch = sampler.make_scratch()
    frame = StateFrame(sampler.n, epoch=0)
    checks = 0
    if hooks:
        hooks.on_start("sequential", 1, sampler.n)
    while True:
        if frame.num % N == 0:
            checks += 1
            frame.epoch = frame.num // N
            if hooks:
                hooks.on_check(frame.epoch, frame)
            if sampler.check_for_stop(frame):
                break
        idx = sampler.sample(scratch, rng)
        add_sample(frame, idx)
        if hooks:
            hooks.on_sample(0, frame.num // N + (frame.num % N != 0), idx)
    return EngineResult(frame, "sequential", 1, [frame.num], checks, frame.epoch)


def _batch_quota(t: int, threads: int, batch: int) -> int:
    return batch // threads + (1 if t < batch % threads else 0)


def run_barrier(sampler: Sampler, config: EngineConfig, hooks: EngineHooks | None = None) -> EngineResult:
    """Batches of ``N`` samples split across threads, a barrier, then one check.

    All threads add into a single shared frame with locked (fetch-add style)
    updates. ``num`` is always a multiple of ``N`` when the run ends.
    """
    T = config.threads
    N = config.check_interval
    frame = StateFrame(sampler.n, epoch=0)
    lock = threading.Lock()
    barrier = threading.Barrier(T)
    stop = False
    counts = [0] * T
    errors: list[BaseException] = []
    if hooks:
        hooks.on_start("barrier", T, sampler.n)

    def batch(t, rng, scratch):
        epoch = frame.epoch + 1
        for _ in range(_batch_quota(t, T, N)):
            idx = sampler.sample(scratch, rng)
            with lock:
                add_sample(frame, idx)
            if hooks:
                hooks.on_sample(t, epoch, idx)
                hooks.delay(t, "sample")
            counts[t] += 1

    def worker(t):
        try:
            rng = thread_rng(config.base_seed, t)
            scratch = sampler.make_scratch()
            while True:
                barrier.wait()
                if stop:
                    return
                batch(t, rng, scratch)
                barrier.wait()
        except threading.BrokenBarrierError:
            pass
        except BaseException as exc:  # noqa: BLE001 - re-raised in the caller
            errors.append(exc)
            barrier.abort()

    threads = [threading.Thread(target=worker, args=(t,), daemon=True) for t in range(1, T)]
    for th in threads:
        th.start()
    checks = 0
    try:
        rng = thread_rng(config.base_seed, 0)
        scratch = sampler.make_scratch()
        while True:
            checks += 1
            if hooks:
                hooks.on_check(frame.epoch, frame)
            if sampler.check_for_stop(frame):
                stop = True
                barrier.wait()
                break
            barrier.wait()
            batch(0, rng, scratch)
            barrier.wait()
            frame.epoch += 1
    except threading.BrokenBarrierError:
        pass
    except BaseException:
        stop = True
        barrier.abort()
        raise
    finally:
        for th in threads:
            th.join()
    if errors:
        raise errors[0]
    return EngineResult(frame, "barrier", T, counts, checks, frame.epoch)
