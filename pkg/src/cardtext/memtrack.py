"""Wall-clock and allocation high-water measurement around a call."""
from __future__ import annotations

import gc
import time
import tracemalloc
from contextlib import contextmanager
from dataclasses import dataclass


@dataclass
class Measurement:
    wall_time: float = 0.0
    peak_alloc: int = 0


@contextmanager
def measure(track_memory: bool = True):
    """Time the body and record the peak of bytes allocated inside it.

    The peak is relative to what was live on entry, so inputs prepared
    before the ``with`` block are not counted. The cyclic garbage collector
    is paused inside the body, as ``timeit`` does.
    """
    m = Measurement()
    started_here = False
    if track_memory:
        if not tracemalloc.is_tracing():
            tracemalloc.start()
            started_here = True
        base = tracemalloc.get_traced_memory()[0]
        tracemalloc.reset_peak()
    gc_was_enabled = gc.isenabled()
    gc.disable()
    t0 = time.perf_counter()
    try:
        yield m
    finally:
        m.wall_time = time.perf_counter() - t0
        if gc_was_enabled:
            gc.enable()
        if track_memory:
            m.peak_alloc = max(0, tracemalloc.get_traced_memory()[1] - base)
            if started_here:
                tracemalloc.stop()
