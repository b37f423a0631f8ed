"""Counter-based splittable random streams.

A stream is identified by the 128-bit Philox key ``(master_seed,
stream_id)``.  Distinct keys yield statistically independent streams that
can be replayed individually, so per-trial and per-row substreams are
derived arithmetically instead of by splitting mutable generator state.
Draws from one stream never depend on how many values another stream has
produced, which keeps large experiments reproducible under any access
order and across platforms.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError

__all__ = ["mix64", "SeededRng"]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(a: int, b: int = 0) -> int:
    """Mix two nonnegative ints into one well-spread 64-bit value.

    Splitmix64 finalizer applied to ``a`` xor a Weyl multiple of ``b``.
    Used to derive child stream keys; collisions between distinct (a, b)
    pairs are as unlikely as 64-bit hash collisions.
    """
    z = (int(a) ^ ((int(b) + 1) * _GOLDEN)) & _MASK64
    z = (z + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


class SeededRng:
    """Replayable random stream keyed by ``(master_seed, stream_id)``.

    Parameters
    ----------
    master_seed : int
        Top-level seed, any value in ``[0, 2**64)``.
    stream_id : int, optional
        Substream index in ``[0, 2**64)``.  Streams with different ids are
        independent.

    Notes
    -----
    The underlying bit generator is numpy's Philox with the pair as its
    key.  The instance is stateful (draws advance an internal generator)
    but the stream's origin is fully determined by the key, so two
    instances built with the same pair produce identical sequences.
    """

    def __init__(self, master_seed: int, stream_id: int = 0):
        for name, value in (("master_seed", master_seed), ("stream_id", stream_id)):
            if not isinstance(value, (int, np.integer)):
                raise ValidationError(f"{name} must be an int, got {type(value).__name__}")
            if not 0 <= int(value) < 2**64:
                raise ValidationError(f"{name} must lie in [0, 2**64), got {value}")
        self.master_seed = int(master_seed)
        self.stream_id = int(stream_id)
        self._generator: np.random.Generator | None = None

    @property
    def generator(self) -> np.random.Generator:
        """The stream's numpy generator, created on first use."""
        if self._generator is None:
            bitgen = np.random.Philox(key=np.array([self.master_seed, self.stream_id], dtype=np.uint64))
            self._generator = np.random.Generator(bitgen)
        return self._generator

    def random(self, size=None):
        """Uniform doubles in [0, 1)."""
        return self.generator.random(size)

    def choice_index(self, cdf: np.ndarray, size=None):
        """Sample indices with cumulative weights ``cdf`` (last entry 1)."""
        u = self.generator.random(size)
        return np.searchsorted(cdf, u, side="right")

    def derive(self, key: int) -> "SeededRng":
        """Independent child stream; deterministic in (self key, ``key``)."""
        return SeededRng(mix64(self.master_seed, self.stream_id), key)

    def __repr__(self) -> str:
        return f"SeededRng(master_seed={self.master_seed}, stream_id={self.stream_id})"
