"""
Key file storage.

A key file is UTF-8 JSON with exactly the fields
``version, method, block_size, dims, n, seed, payload``. The payload holds
permutation indices (shuffle), bits (flip) or the row-major matrix (rom).
Floats are written in their shortest round-trip form, so a saved ROM key
loads back bit-exactly.
"""
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from errors import KeyFormatError
from keys.rng import SEED_LIMIT
from keys.secret_key import METHODS, FlipKey, RomKey, SecretKey, ShuffleKey, block_elements

logger = logging.getLogger(__name__)

KEYFILE_VERSION = 1
FIELDS = ("version", "method", "block_size", "dims", "n", "seed", "payload")


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _finite_float(value, index: int) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise KeyFormatError(f"payload[{index}]: expected a finite number, got {value!r}")
    try:
        number = float(value)
    except OverflowError:
        raise KeyFormatError(f"payload[{index}]: {value!r} is out of float range") from None
    if not math.isfinite(number):
        raise KeyFormatError(f"payload[{index}]: expected a finite number, got {value!r}")
    return number


@dataclass
class KeyFile:
    """The on-disk form of a key, before key-level validation."""
    method: str
    block_size: int
    dims: int
    n: int
    payload: List[Union[int, float]]
    seed: Optional[int] = None
    version: int = KEYFILE_VERSION

    @classmethod
    def from_key(cls, key: SecretKey) -> "KeyFile":
        if isinstance(key, ShuffleKey):
            payload = [int(i) for i in key.perm]
        elif isinstance(key, FlipKey):
            payload = [int(b) for b in key.bits]
        elif isinstance(key, RomKey):
            payload = [float(x) for x in key.matrix.reshape(-1)]
        else:
            raise KeyFormatError(f"unsupported key type {type(key).__name__}")
        return cls(method=key.method, block_size=key.M, dims=key.dims, n=key.N,
                   payload=payload, seed=key.seed)

    def to_key(self) -> SecretKey:
        """Build the key, running the key's own invariants (bijection, bits, orthogonality)."""
        if self.method == 'shuffle':
            return ShuffleKey(self.block_size, self.dims, perm=self.payload, seed=self.seed)
        if self.method == 'flip':
            return FlipKey(self.block_size, self.dims, bits=self.payload, seed=self.seed)
        matrix = np.array(self.payload, dtype=np.float64).reshape(self.n, self.n)
        return RomKey(self.block_size, self.dims, matrix=matrix, seed=self.seed)

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "method": self.method,
            "block_size": self.block_size,
            "dims": self.dims,
            "n": self.n,
            "seed": self.seed,
            "payload": self.payload,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), allow_nan=False) + "\n"

    @classmethod
    def loads(cls, text: str) -> "KeyFile":
        """
        Parse and check a key file.

        Raises:
            KeyFormatError: naming the offending field
        """
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise KeyFormatError(f"malformed key file: {e}") from e

        if not isinstance(data, dict):
            raise KeyFormatError("key file must contain a JSON object")
        unknown = sorted(set(data) - set(FIELDS))
        if unknown:
            raise KeyFormatError(f"unknown field(s): {', '.join(unknown)}")
        missing = [name for name in FIELDS if name not in data]
        if missing:
            raise KeyFormatError(f"missing field(s): {', '.join(missing)}")

        if not _is_int(data["version"]) or data["version"] != KEYFILE_VERSION:
            raise KeyFormatError(f"version: expected {KEYFILE_VERSION}, got {data['version']!r}")
        method = data["method"]
        if method not in METHODS:
            raise KeyFormatError(f"method: expected one of {', '.join(METHODS)}, got {method!r}")
        block_size = data["block_size"]
        if not _is_int(block_size) or block_size < 1:
            raise KeyFormatError(f"block_size: expected a positive integer, got {block_size!r}")
        dims = data["dims"]
        if not _is_int(dims) or dims not in (1, 2):
            raise KeyFormatError(f"dims: expected 1 or 2, got {dims!r}")
        n = data["n"]
        expected_n = block_elements(block_size, dims)
        if not _is_int(n) or n != expected_n:
            raise KeyFormatError(f"n: expected {expected_n} for block_size={block_size}, dims={dims}, got {n!r}")
        seed = data["seed"]
        if seed is not None and (not _is_int(seed) or not 0 <= seed < SEED_LIMIT):
            raise KeyFormatError(f"seed: expected null or an integer in [0, 2**64), got {seed!r}")

        payload = data["payload"]
        if not isinstance(payload, list):
            raise KeyFormatError("payload: expected a list")
        expected_len = n * n if method == 'rom' else n
        if len(payload) != expected_len:
            raise KeyFormatError(f"payload: expected {expected_len} values for {method}, got {len(payload)}")
        if method == 'rom':
            payload = [_finite_float(value, index) for index, value in enumerate(payload)]
        else:
            upper = n if method == 'shuffle' else 2
            for index, value in enumerate(payload):
                if not _is_int(value) or not 0 <= value < upper:
                    raise KeyFormatError(f"payload[{index}]: expected an integer in [0, {upper}), got {value!r}")

        return cls(method=method, block_size=block_size, dims=dims, n=n,
                   payload=payload, seed=seed, version=data["version"])


def write_keyfile(keyfile: KeyFile, path) -> None:
    Path(path).write_text(keyfile.dumps(), encoding='utf-8')


def read_keyfile(path) -> KeyFile:
    try:
        text = Path(path).read_text(encoding='utf-8')
    except UnicodeDecodeError as e:
        raise KeyFormatError(f"key file {path} is not UTF-8 text") from e
    return KeyFile.loads(text)


def save_key(key: SecretKey, path) -> None:
    """Write ``key`` to ``path`` as a key file."""
    write_keyfile(KeyFile.from_key(key), path)
    logger.info(f"💾 Saved {key.method} key (N={key.N}) to {path}")


def load_key(path) -> SecretKey:
    """Read and validate a key file."""
    key = read_keyfile(path).to_key()
    logger.info(f"🔑 Loaded {key.method} key (M={key.M}, dims={key.dims}) from {path}")
    return key
