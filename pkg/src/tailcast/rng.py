"""Splittable deterministic random streams.

A stream is identified by (seed, stream id). Identical identifiers always
produce bit-identical draw sequences; distinct ids give statistically
independent generators. Substreams extend the identifier with extra indices,
so work units (prediction points, replicates) can be keyed by index rather
than by scheduling order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngStream:
    """Identifier of a reproducible random stream."""

    seed: int
    stream: int = 0

    def __post_init__(self):
        if not (0 <= int(self.seed) <= _MASK64):
            raise ValueError("seed must fit in 64 bits")
        if not (0 <= int(self.stream) <= _MASK64):
            raise ValueError("stream id must fit in 64 bits")

    def generator(self, *path: int) -> np.random.Generator:
        """Fresh generator for this stream, optionally extended by sub-indices.

        Each call returns a new generator starting from the same state, so
        a consumer owns its draw sequence end to end.
        """
        key = (int(self.stream),) + tuple(int(p) for p in path)
        seq = np.random.SeedSequence(entropy=int(self.seed), spawn_key=key)
        return np.random.Generator(np.random.PCG64(seq))

    def split(self, index: int) -> "RngStream":
        """Derived stream with a distinct id, deterministic in ``index``."""
        mixed = (int(self.stream) * 0x9E3779B97F4A7C15 + 2 * int(index) + 1) & _MASK64
        return RngStream(self.seed, mixed)


def as_generator(rng) -> np.random.Generator:
    """Accept an RngStream, a Generator, or an int seed; return a Generator."""
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, (int, np.integer)):
        return RngStream(int(rng)).generator()
    raise TypeError(f"cannot make a Generator from {type(rng).__name__}")
