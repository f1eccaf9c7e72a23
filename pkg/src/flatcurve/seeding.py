"""Deterministic 64-bit seed derivation.

Child seeds are produced by folding each key into the parent with the
SplitMix64 finalizer, so a cell or trial seed depends only on its own
coordinates and never on execution order.
"""

from __future__ import annotations

import struct

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    x = (x + _GOLDEN) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def float_key(value: float) -> int:
    """IEEE-754 bit pattern of ``value`` as an unsigned 64-bit int."""
    return struct.unpack("<Q", struct.pack("<d", float(value)))[0]


def mix(seed: int, *keys: int) -> int:
    h = splitmix64(seed & MASK64)
    for key in keys:
        h = splitmix64(h ^ (key & MASK64))
    return h


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed & MASK64))
