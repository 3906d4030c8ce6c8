"""
Key-space size of each cipher.
"""
import math
from dataclasses import dataclass
from typing import Optional

from errors import UsageError
from keys.secret_key import block_elements


@dataclass(frozen=True)
class KeySpace:
    """Exact key count (None for the continuous ROM space) and its log2."""
    method: str
    N: int
    count: Optional[int]
    bits: Optional[float]
    note: str = ""

    @property
    def continuous(self) -> bool:
        return self.count is None

    def __str__(self) -> str:
        if self.continuous:
            return f"keyspace: continuous ({self.note})"
        return f"keyspace: {self.count} ({self.bits:.3f} bits)"


def keyspace_bits(method: str, M: int, dims: int = 1) -> KeySpace:
    """
    Count the distinct keys of a cipher.

    shuffle: N! permutations; flip: 2**N sign patterns; rom: real-valued
    orthogonal matrices, reported as continuous.
    """
    N = block_elements(M, dims)
    if method == 'shuffle':
        count = math.factorial(N)
        return KeySpace(method, N, count, math.log2(count))
    if method == 'flip':
        return KeySpace(method, N, 1 << N, float(N))
    if method == 'rom':
        return KeySpace(
            method, N, None, None,
            note=f"{N}x{N} orthogonal matrix with real-valued entries",
        )
    raise UsageError(f"unknown method {method!r}")
