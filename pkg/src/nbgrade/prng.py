"""SplitMix64 generator shared by fold splitting and cohort generation.

Bit-exact definition, so other implementations can reproduce folds and
cohorts:

* state advance: ``state = (state + 0x9E3779B97F4A7C15) mod 2**64``
* output: ``mix64(state)`` where ``mix64(z)`` is
  ``z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
  z *= 0x94D049BB133111EB; z ^= z >> 31`` (all mod 2**64)
* ``below(n)``: draw ``x``; reject while ``x < (2**64 mod n)``; return
  ``x mod n``
* ``uniform()``: ``(x >> 11) * 2**-53``, a double in [0, 1)
* ``derive(seed, *indices)``: start from ``s = seed``; for each index
  ``i``, ``s = mix64(s ^ mix64((i + GOLDEN) mod 2**64))`` where GOLDEN is
  the increment above.  The result seeds an independent ``SplitMix64``.
"""

from __future__ import annotations

from collections.abc import Sequence

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive(seed: int, *indices: int) -> int:
    """Mix stream indices into a seed, giving a per-stream starting state."""
    s = seed & MASK64
    for i in indices:
        s = mix64(s ^ mix64((i + GOLDEN) & MASK64))
    return s


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        if seed < 0 or seed > MASK64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.state = seed

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix64(self.state)

    def below(self, n: int) -> int:
        """Unbiased integer in [0, n) by rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        threshold = (1 << 64) % n
        while True:
            x = self.next_u64()
            if x >= threshold:
                return x % n

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def choice_index(self, weights: Sequence[float]) -> int:
        """Index drawn with probability proportional to ``weights`` (which sum to 1).

        One ``uniform()`` draw is compared against running cumulative sums;
        floating slack at the top end falls into the last positive weight.
        """
        u = self.uniform()
        acc = 0.0
        last = 0
        for i, w in enumerate(weights):
            if w > 0:
                last = i
            acc += w
            if u < acc and w > 0:
                return i
        return last

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates: for i = n-1 down to 1, swap items[i] with items[below(i+1)]."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
