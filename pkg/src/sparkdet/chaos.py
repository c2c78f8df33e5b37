"""Seeded source for every chaotic choice.

A counter-based SplitMix64 stream: output ``i`` depends only on the seed and
``i``, so a source can be snapshotted, replayed, or split into independent
children without sharing state.
"""

from __future__ import annotations

from dataclasses import dataclass

MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *labels: int) -> int:
    """Mix extra integers into a seed, e.g. a trial index or a vertex id."""
    s = seed & MASK64
    for label in labels:
        s = mix64(s ^ mix64((label & MASK64) + _GAMMA))
    return s


@dataclass
class ChaosSource:
    seed: int
    counter: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.seed <= MASK64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if not 0 <= self.counter <= MASK64:
            raise ValueError("counter must be an unsigned 64-bit integer")

    def next_u64(self) -> int:
        self.counter = (self.counter + 1) & MASK64
        return mix64(self.seed + self.counter * _GAMMA)

    def randbelow(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` by rejection, no modulo bias."""
        if n <= 0:
            raise ValueError("randbelow needs a positive bound")
        if n == 1:
            return 0
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n

    def random(self) -> float:
        """Uniform float in ``[0, 1)`` with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def split(self) -> "ChaosSource":
        """A child source whose stream is independent of this one's."""
        return ChaosSource(derive_seed(self.next_u64(), 0x5EED))

    def copy(self) -> "ChaosSource":
        return ChaosSource(self.seed, self.counter)

    def state(self) -> tuple[int, int]:
        return (self.seed, self.counter)


def trial_sources(seed: int, trials: int) -> list[ChaosSource]:
    """One source per trial, each derived from ``(seed, trial index)``."""
    return [ChaosSource(derive_seed(seed, i)) for i in range(trials)]
