"""Deterministic pseudo-random draws, reproducible across platforms.

The benchmark harness needs the same draw stream regardless of numpy
version or OS, so random points come from SplitMix64 (Steele, Lea &
Flood, 2014) rather than from ``numpy.random``.  A 64-bit state is
advanced by the golden-ratio increment and hashed; uniform doubles take
the top 53 bits of the hash.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """SplitMix64 stream seeded with a 64-bit integer."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN_GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform(self, lower: float, upper: float) -> float:
        return lower + self.next_float() * (upper - lower)


def derive_case_seed(seed: int, case_id: int) -> int:
    """Per-case seed: ``seed XOR case_id * GOLDEN_GAMMA`` (mod 2^64)."""
    return (seed ^ ((case_id * GOLDEN_GAMMA) & _MASK)) & _MASK
