"""Deterministic 64-bit PRNG used everywhere randomness is needed.

Fold splits, Pegasos sampling, and the synthetic-corpus generator all draw
from the same generator so that runs are reproducible from a single seed and
other implementations can match them exactly. The generator is xorshift64*
(Marsaglia xorshift with a finalizing multiply). All arithmetic is modulo
2**64. Update equations, applied to the 64-bit state x:

    x ^= x >> 12
    x ^= (x << 25) mod 2**64
    x ^= x >> 27
    output = (x * 0x2545F4914F6CDD1D) mod 2**64

The state must be nonzero; a zero seed is replaced by the fixed constant
0x9E3779B97F4A7C15. Derived quantities:

- uniform double in [0, 1):   (output >> 11) * 2**-53
- bounded integer below m:    rejection sampling on output, then mod m
- standard normal:            Box-Muller on two uniforms

``mix_seed`` derives stream seeds from a root seed and an index using one
splitmix64 step, so concurrent sub-tasks (per dimension, per fold) get
decorrelated but reproducible streams.
"""

import math

MASK64 = (1 << 64) - 1
_MULT = 0x2545F4914F6CDD1D
_ZERO_SEED_SUBSTITUTE = 0x9E3779B97F4A7C15


class XorShift64Star:
    """xorshift64* generator; see the module docstring for the equations."""

    def __init__(self, seed):
        seed = int(seed) & MASK64
        self._state = seed if seed != 0 else _ZERO_SEED_SUBSTITUTE
        self._spare_normal = None

    def next_u64(self):
        x = self._state
        x ^= x >> 12
        x = (x ^ (x << 25)) & MASK64
        x ^= x >> 27
        self._state = x
        return (x * _MULT) & MASK64

    def random(self):
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0 ** -53

    def randbelow(self, m):
        """Unbiased integer in [0, m) via rejection sampling."""
        if m <= 0:
            raise ValueError("randbelow needs a positive bound")
        limit = MASK64 + 1 - ((MASK64 + 1) % m)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % m

    def shuffle(self, items):
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def normal(self):
        """Standard normal via Box-Muller; pairs are cached."""
        if self._spare_normal is not None:
            z = self._spare_normal
            self._spare_normal = None
            return z
        # u1 in (0, 1] so the log is finite.
        u1 = ((self.next_u64() >> 11) + 1) * 2.0 ** -53
        u2 = self.random()
        radius = math.sqrt(-2.0 * math.log(u1))
        theta = 2.0 * math.pi * u2
        self._spare_normal = radius * math.sin(theta)
        return radius * math.cos(theta)

    def normal_pair(self, rho):
        """A bivariate standard-normal pair with correlation rho."""
        z1 = self.normal()
        z2 = self.normal()
        return z1, rho * z1 + math.sqrt(1.0 - rho * rho) * z2


def mix_seed(root_seed, index):
    """Derive a sub-stream seed from a root seed and a stream index.

    One splitmix64 step on root_seed + (index+1)*GOLDEN, which keeps
    distinct indices far apart even for adjacent small values.
    """
    z = (int(root_seed) + (int(index) + 1) * 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64
