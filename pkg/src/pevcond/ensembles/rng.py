"""
Counter-based random streams keyed by (seed, stream).

Each key maps to an independent numpy Philox generator seeded through a
SeedSequence whose spawn key is the stream index, so trial t of a run draws the
same numbers whichever worker evaluates it and in whatever order.
"""

from dataclasses import dataclass

import numpy as np


UINT64_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class RngKey:
    """
    Seed of a run and stream index of one trial, both 64-bit.

    Negative seeds are accepted and reduced modulo 2^64.
    """
    seed: int
    stream: int

    def __post_init__(self):
        if not -(1 << 63) <= int(self.seed) <= UINT64_MASK:
            raise ValueError(f"Seed must fit in 64 bits, got {self.seed}")
        if not 0 <= int(self.stream) <= UINT64_MASK:
            raise ValueError(f"Stream must be an unsigned 64-bit integer, got {self.stream}")

    def generator(self) -> np.random.Generator:
        sequence = np.random.SeedSequence(
            entropy=int(self.seed) & UINT64_MASK,
            spawn_key=(int(self.stream),),
        )
        return np.random.Generator(np.random.Philox(sequence))


def generator_for(seed: int, stream: int) -> np.random.Generator:
    return RngKey(seed, stream).generator()
