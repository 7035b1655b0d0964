"""Seedable, splittable 64-bit random generator (SplitMix64).

All randomized components draw from this generator, never from the global
numpy state.  The stream discipline is one generator per solve; independent
sub-streams (e.g. the noise source of the approximate cut-flow wrapper) are
derived with :meth:`SplitMix64.split`.  The block method produces exactly the
same sequence as repeated scalar calls, which is what lets the compiled and
the pure-Python solver loops consume identical draw sequences.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV_2_53 = 2.0 ** -53


class SplitMix64:
    """SplitMix64 generator (Steele, Lea, Flood's update/mix constants)."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = int(seed) & _MASK64

    @property
    def state(self) -> int:
        return self._state

    def next_uint64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_uint64() >> 11) * _INV_2_53

    def split(self) -> "SplitMix64":
        """Derive an independent generator; advances this stream by one."""
        return SplitMix64(self.next_uint64())

    def uniform_block(self, count: int) -> np.ndarray:
        """The next `count` uniform doubles as an array.

        Equivalent to calling :meth:`next_float` `count` times; the state
        advances accordingly.
        """
        if count < 0:
            raise ValueError("count must be >= 0")
        steps = np.arange(1, count + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = np.uint64(self._state) + steps * np.uint64(_GOLDEN)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
            z = z ^ (z >> np.uint64(31))
        self._state = (self._state + count * _GOLDEN) & _MASK64
        return (z >> np.uint64(11)).astype(np.float64) * _INV_2_53
