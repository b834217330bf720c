"""Deterministic randomness: counter-based generators keyed by
(seed, replica, stream) so results never depend on scheduling or the
degree of parallelism."""

from __future__ import annotations

import numpy as np

__all__ = ["rng_for"]


def rng_for(seed: int, replica: int = 0, stream: int = 0
            ) -> np.random.Generator:
    """A Philox generator for one logical substream.

    Identical keys give byte-identical draw sequences on every platform,
    and distinct (replica, stream) pairs are independent, so replicas
    can run in any order or in parallel.
    """
    if not (0 <= replica < 2 ** 32 and 0 <= stream < 2 ** 32):
        raise ValueError("replica and stream must fit in 32 bits")
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF,
                    (replica << 32) | stream], dtype=np.uint64)
    bg = np.random.Philox(key=key)
    return np.random.Generator(bg)
