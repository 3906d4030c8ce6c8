"""
Secret keys for the three block ciphers.

All indices are 0-based. A key always acts on flattened blocks of
N = M (1-D) or N = M*M (2-D) elements.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import ClassVar, Optional

import numpy as np

from errors import InvalidBlockSize, KeyFormatError

ROM_ORTHOGONALITY_TOLERANCE = 1e-10

METHODS = ("shuffle", "flip", "rom")


def block_elements(M: int, dims: int) -> int:
    """N for block size M: M for waveforms, M*M for spectrograms."""
    if isinstance(M, bool) or not isinstance(M, (int, np.integer)) or M < 1:
        raise InvalidBlockSize(f"block size must be a positive integer, got {M!r}")
    if dims not in (1, 2):
        raise KeyFormatError(f"dims must be 1 or 2, got {dims!r}")
    return int(M) if dims == 1 else int(M) * int(M)


@dataclass(frozen=True, eq=False)
class SecretKey(ABC):
    """Common metadata of every key kind."""
    method: ClassVar[str] = ""

    M: int
    dims: int

    @property
    def N(self) -> int:
        return block_elements(self.M, self.dims)

    def _check_length(self, length: int, what: str):
        if length != self.N:
            raise KeyFormatError(
                f"{self.method} key with M={self.M}, dims={self.dims} needs {self.N} {what}, got {length}"
            )

    @abstractmethod
    def inverse(self) -> "SecretKey":
        """Key whose transform undoes this one."""

    @abstractmethod
    def equals(self, other: "SecretKey") -> bool:
        """Same kind, shape and key material."""


@dataclass(frozen=True, eq=False)
class ShuffleKey(SecretKey):
    """Permutation key K_s; encryption gathers ``out[k] = x[perm[k]]``."""
    method: ClassVar[str] = "shuffle"

    perm: np.ndarray = None
    seed: Optional[int] = None

    def __post_init__(self):
        try:
            perm = np.array(self.perm, dtype=np.int64).reshape(-1)
        except (OverflowError, TypeError, ValueError) as e:
            raise KeyFormatError(f"shuffle key indices must be integers: {e}") from e
        self._check_length(perm.size, "indices")
        if not np.array_equal(np.sort(perm), np.arange(self.N)):
            raise KeyFormatError(f"shuffle key is not a permutation of 0..{self.N - 1}")
        perm.setflags(write=False)
        object.__setattr__(self, 'perm', perm)

    def inverse(self) -> "ShuffleKey":
        return ShuffleKey(self.M, self.dims, perm=np.argsort(self.perm), seed=self.seed)

    def equals(self, other: SecretKey) -> bool:
        return (isinstance(other, ShuffleKey) and (self.M, self.dims) == (other.M, other.dims)
                and np.array_equal(self.perm, other.perm))


@dataclass(frozen=True, eq=False)
class FlipKey(SecretKey):
    """Sign-inversion key K_f; bit 1 negates the element."""
    method: ClassVar[str] = "flip"

    bits: np.ndarray = None
    seed: Optional[int] = None

    def __post_init__(self):
        bits = np.array(self.bits).reshape(-1)
        self._check_length(bits.size, "bits")
        if bits.size and not np.all((bits == 0) | (bits == 1)):
            raise KeyFormatError("flip key bits must all be 0 or 1")
        bits = bits.astype(np.uint8)
        bits.setflags(write=False)
        object.__setattr__(self, 'bits', bits)

    @property
    def signs(self) -> np.ndarray:
        """K'_f as +1/-1 values: 1 - 2*bits."""
        return 1.0 - 2.0 * self.bits.astype(np.float64)

    def inverse(self) -> "FlipKey":
        return self

    def equals(self, other: SecretKey) -> bool:
        return (isinstance(other, FlipKey) and (self.M, self.dims) == (other.M, other.dims)
                and np.array_equal(self.bits, other.bits))


@dataclass(frozen=True, eq=False)
class RomKey(SecretKey):
    """Random orthogonal matrix key K_r; encryption is ``x @ K_r``."""
    method: ClassVar[str] = "rom"

    matrix: np.ndarray = None
    seed: Optional[int] = None

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=np.float64)
        if matrix.ndim == 1 and matrix.size == self.N * self.N:
            matrix = matrix.reshape(self.N, self.N)
        if matrix.shape != (self.N, self.N):
            raise KeyFormatError(f"rom key needs a {self.N} x {self.N} matrix, got {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise KeyFormatError("rom key contains NaN or infinite values")
        error = orthogonality_error(matrix)
        if error > ROM_ORTHOGONALITY_TOLERANCE:
            raise KeyFormatError(f"rom key is not orthogonal (max |K K^T - I| = {error:.3e})")
        matrix.setflags(write=False)
        object.__setattr__(self, 'matrix', matrix)

    def inverse(self) -> "RomKey":
        return RomKey(self.M, self.dims, matrix=np.ascontiguousarray(self.matrix.T), seed=self.seed)

    def equals(self, other: SecretKey) -> bool:
        return (isinstance(other, RomKey) and (self.M, self.dims) == (other.M, other.dims)
                and np.array_equal(self.matrix, other.matrix))


def orthogonality_error(matrix: np.ndarray) -> float:
    """max |K K^T - I|."""
    if matrix.size == 0:
        return 0.0
    return float(np.max(np.abs(matrix @ matrix.T - np.eye(matrix.shape[0]))))


def invert_key(key: SecretKey) -> SecretKey:
    """
    Key whose transform undoes ``key``'s.

    shuffle -> inverse permutation, flip -> itself, rom -> transpose.
    """
    return key.inverse()
