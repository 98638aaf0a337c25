"""Seeded random streams.

Every randomized component draws from numpy's PCG64 seeded by
``SeedSequence(seed, spawn_key=(crc32(label), ...))`` so that separate
parts of one instance (say the matrix and the directions) get independent,
reproducible streams.
"""

from __future__ import annotations

import zlib

import numpy as np

MASK64 = (1 << 64) - 1


def derive_rng(seed: int, *labels) -> np.random.Generator:
    if seed is None:
        raise ValueError("a seed is required for randomized runs")
    seed = int(seed)
    if seed < 0 or seed > MASK64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    key = tuple(zlib.crc32(str(label).encode()) for label in labels)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def uint64s(rng: np.random.Generator, size) -> np.ndarray:
    return rng.integers(0, 1 << 64, size=size, dtype=np.uint64, endpoint=False)
