"""Reproducible, splittable random streams.

Every stream is a Philox-4x64 counter-based generator keyed by a 128-bit key:
the high word comes from mixing ``(master_seed, trial_index)`` and the low word
names a substream (channel, symbols, noise, ...). Two streams with different
keys are statistically independent and no stream ever depends on how many
draws another stream made, so trials can run in any order on any worker.
"""
from __future__ import annotations

import numpy as np

from . import kernels

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

# substream identifiers (low key word)
CHANNEL = 0
SYMBOLS = 1
NOISE = 2
DROP = 3
SHADOWING = 4

QPSK_POINTS = np.array([1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j]) / np.sqrt(2.0)


def splitmix64(x: int) -> int:
    """SplitMix64 finalizer (Steele, Lea & Flood)."""
    x = (x + GOLDEN) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def mix_seed(master_seed: int, index: int) -> int:
    """Mix a master seed and a non-negative index into a 64-bit trial seed."""
    if index < 0:
        raise ValueError("index must be non-negative")
    return splitmix64(splitmix64(master_seed & MASK64) ^ ((index * GOLDEN) & MASK64))


class Stream:
    """A single Philox stream with the samplers the simulator needs."""

    def __init__(self, seed: int, substream: int = 0):
        self.seed = seed & MASK64
        self.substream = substream & MASK64
        key = (self.seed << 64) | self.substream
        self._gen = np.random.Generator(np.random.Philox(key=key))

    @classmethod
    def for_trial(cls, master_seed: int, trial_index: int, substream: int = 0) -> "Stream":
        return cls(mix_seed(master_seed, trial_index), substream)

    def child(self, substream: int) -> "Stream":
        """Sibling stream sharing this stream's seed word."""
        return Stream(self.seed, substream)

    def __repr__(self):
        return f"Stream(seed={self.seed:#018x}, substream={self.substream})"

    def uniform(self, size=None) -> np.ndarray:
        """Uniform samples on [0, 1)."""
        return self._gen.random(size)

    def integers(self, low, high=None, size=None):
        return self._gen.integers(low, high, size=size)

    def complex_normal(self, shape) -> np.ndarray:
        """CN(0, 1) samples of the given shape via Box-Muller."""
        shape = (shape,) if np.isscalar(shape) else tuple(shape)
        n = int(np.prod(shape, dtype=np.int64))
        u = self._gen.random(2 * n)
        # first half mapped to (0, 1] so the log stays finite
        z = kernels.box_muller(1.0 - u[:n], u[n:])
        return z.reshape(shape)

    def normal(self, shape) -> np.ndarray:
        """Real N(0, 1) samples, taken from the Box-Muller pair."""
        z = self.complex_normal(shape)
        return np.sqrt(2.0) * z.real

    def qpsk(self, shape) -> np.ndarray:
        """Unit-modulus QPSK symbols, i.i.d. uniform over the four points."""
        return QPSK_POINTS[self._gen.integers(0, 4, size=shape)]
