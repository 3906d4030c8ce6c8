"""
Seeded secret-key generation.

The same (method, M, dims, seed) always yields the same key; key pairs for
wrong-key experiments come from neighbouring seeds.
"""
import logging
from typing import Optional

from keys.householder import householder_qr, normalize_signs
from keys.rng import make_rng
from keys.secret_key import FlipKey, RomKey, SecretKey, ShuffleKey, block_elements
from errors import UsageError

logger = logging.getLogger(__name__)


def keygen_shuffle(M: int, dims: int = 1, seed: Optional[int] = None) -> ShuffleKey:
    """Fisher-Yates permutation of [0, ..., N-1]."""
    N = block_elements(M, dims)
    rng = make_rng(seed)
    key = ShuffleKey(M, dims, perm=rng.permutation(N), seed=rng.seed)
    logger.debug(f"Generated shuffle key (N={N}, seed={rng.seed})")
    return key


def keygen_flip(M: int, dims: int = 1, seed: Optional[int] = None) -> FlipKey:
    """N independent fair bits."""
    N = block_elements(M, dims)
    rng = make_rng(seed)
    key = FlipKey(M, dims, bits=rng.bits(N), seed=rng.seed)
    logger.debug(f"Generated flip key (N={N}, seed={rng.seed})")
    return key


def keygen_rom(M: int, dims: int = 1, seed: Optional[int] = None) -> RomKey:
    """
    Haar-distributed orthogonal N x N matrix.

    Sample a standard normal matrix, factor it with Householder QR and negate
    every column of Q whose R diagonal entry is negative.
    """
    N = block_elements(M, dims)
    rng = make_rng(seed)
    A = rng.normal(N * N).reshape(N, N)
    Q, R = householder_qr(A)
    Q, _ = normalize_signs(Q, R)
    key = RomKey(M, dims, matrix=Q, seed=rng.seed)
    logger.debug(f"Generated rom key (N={N}, seed={rng.seed})")
    return key


_GENERATORS = {
    'shuffle': keygen_shuffle,
    'flip': keygen_flip,
    'rom': keygen_rom,
}


def keygen(method: str, M: int, dims: int = 1, seed: Optional[int] = None) -> SecretKey:
    """Dispatch to the generator for ``method``."""
    try:
        generator = _GENERATORS[method]
    except KeyError:
        raise UsageError(f"unknown method {method!r}; expected one of {', '.join(_GENERATORS)}") from None
    return generator(M, dims, seed)
