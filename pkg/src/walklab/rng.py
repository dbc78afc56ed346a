"""Deterministic counter-based sample streams.

Every Monte Carlo sample draws from its own Philox stream keyed by
``(seed, sample_index)``, so results are bit-identical no matter how samples
are batched or distributed across workers.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def sample_stream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for one (seed, sample index) pair."""
    key = np.array([seed & _MASK64, index & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def chunk_schedule(horizon: int, first: int = 512, factor: int = 4,
                   largest: int = 65_536):
    """Deterministic chunk sizes covering ``horizon`` draws."""
    remaining = horizon
    size = first
    while remaining > 0:
        take = min(size, remaining)
        yield take
        remaining -= take
        if size < largest:
            size = min(size * factor, largest)
