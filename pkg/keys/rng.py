"""
Deterministic random source for key generation.

The generator is Philox4x64-10 (numpy's ``Philox`` bit generator), keyed
directly with the 64-bit seed and started at counter zero. Only its raw
64-bit output stream is consumed; every derived draw (bounded integers,
uniforms, normals, shuffles) is implemented here so that key fixtures stay
identical across platforms and numpy releases.
"""
import math
import secrets
from typing import List, Optional

import numpy as np

from errors import UsageError

SEED_LIMIT = 1 << 64
_U64 = 1 << 64
_DOUBLE_SCALE = 1.0 / (1 << 53)


def validate_seed(seed: int) -> int:
    """Return ``seed`` as an int, rejecting values outside [0, 2**64)."""
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise UsageError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed < SEED_LIMIT:
        raise UsageError(f"seed must be in [0, 2**64), got {seed}")
    return seed


def fresh_seed() -> int:
    """A new unpredictable 64-bit seed."""
    return secrets.randbits(64)


class KeyRng:
    """Seeded counter-based RNG with the draws key generation needs."""

    def __init__(self, seed: int):
        self.seed = validate_seed(seed)
        self._bitgen = np.random.Philox(key=self.seed)

    def raw(self, count: int) -> np.ndarray:
        """``count`` raw 64-bit outputs."""
        return np.asarray(self._bitgen.random_raw(count), dtype=np.uint64)

    def next_u64(self) -> int:
        return int(self._bitgen.random_raw())

    def below(self, bound: int) -> int:
        """Unbiased integer in [0, bound) by rejection of the short final range."""
        if bound < 1:
            raise ValueError(f"bound must be positive, got {bound}")
        limit = _U64 - (_U64 % bound)
        while True:
            value = self.next_u64()
            if value < limit:
                return value % bound

    def uniform(self, count: int) -> np.ndarray:
        """Doubles in [0, 1) from the top 53 bits of each raw output."""
        return (self.raw(count) >> np.uint64(11)).astype(np.float64) * _DOUBLE_SCALE

    def normal(self, count: int) -> np.ndarray:
        """Standard normal samples via the Box-Muller transform."""
        pairs = (count + 1) // 2
        u = self.uniform(2 * pairs).reshape(pairs, 2)
        radius = np.sqrt(-2.0 * np.log(1.0 - u[:, 0]))
        angle = 2.0 * math.pi * u[:, 1]
        z = np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])
        return z.reshape(-1)[:count]

    def bits(self, count: int) -> np.ndarray:
        """Fair bits: floor(2u) for uniforms u in [0, 1)."""
        return np.floor(self.uniform(count) * 2.0).astype(np.uint8)

    def permutation(self, n: int) -> List[int]:
        """Fisher-Yates shuffle of [0, ..., n-1]."""
        items = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items


def make_rng(seed: Optional[int]) -> KeyRng:
    """RNG for ``seed``, drawing a fresh seed when none is given."""
    return KeyRng(fresh_seed() if seed is None else seed)
