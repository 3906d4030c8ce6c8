"""
Block-wise encryption and decryption of signals.

Every block is flattened row-major to an N-vector x and transformed with the
same key:

    shuffle  out[k] = x[perm[k]]
    flip     out[k] = x[k] * (1 - 2*bits[k])
    rom      out    = x @ K_r, each entry a correctly rounded sum

then reshaped and put back in place.
"""
import logging
from collections import deque
from typing import Callable, Iterable, Optional

import numpy as np

from errors import KeyMismatch, ShapeError, StreamError
from keys.secret_key import FlipKey, RomKey, SecretKey, ShuffleKey, invert_key
from models import BlockGrid, Signal
from utils.block_utils import from_block_rows, pad_signal, to_block_rows, trim_signal
from utils.conv_utils import patch_inner_products

logger = logging.getLogger(__name__)


def transform_rows(rows: np.ndarray, key: SecretKey) -> np.ndarray:
    """
    Apply ``key`` to every row of a B x N matrix of flattened blocks.

    This one operator is used for query blocks and for model kernels alike.
    """
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[1] != key.N:
        raise KeyMismatch(f"{key.method} key acts on {key.N}-element blocks, got rows of shape {rows.shape}")
    if isinstance(key, ShuffleKey):
        return rows[:, key.perm]
    if isinstance(key, FlipKey):
        return rows * key.signs
    if isinstance(key, RomKey):
        return patch_inner_products(rows, key.matrix.T)
    raise KeyMismatch(f"unsupported key type {type(key).__name__}")


def check_key(signal: Signal, key: SecretKey) -> None:
    """Raise KeyMismatch when the key was made for the other signal dimensionality."""
    if key.dims != signal.dims:
        raise KeyMismatch(f"key is for {key.dims}-D signals but the signal is {signal.dims}-D")


def _apply(signal: Signal, key: SecretKey) -> Signal:
    check_key(signal, key)
    if signal.T == 0:
        return signal
    grid, padded = pad_signal(signal, key.M)
    rows = transform_rows(to_block_rows(padded.data, grid), key)
    logger.debug(f"Transformed {grid.block_count} blocks of {grid.N} elements with {key.method}")
    return padded.with_data(from_block_rows(rows, grid))


def encrypt(signal: Signal, key: SecretKey) -> Signal:
    """
    Encrypt a signal block by block.

    Args:
        signal: waveform or spectrogram; zero padded to multiples of key.M
        key: secret key with matching dims

    Returns:
        Encrypted signal (padded shape, original lengths recorded)

    Raises:
        KeyMismatch: key.dims != signal.dims
    """
    return _apply(signal, key)


def decrypt(signal: Signal, key: SecretKey) -> Signal:
    """
    Undo :func:`encrypt` with the same key and trim the zero padding.

    Raises:
        KeyMismatch: key.dims != signal.dims
    """
    if signal.T == 0:
        check_key(signal, key)
        return signal
    return trim_signal(_apply(signal, invert_key(key)))


class _ColumnBuffer:
    """Collects time columns until a full block column of M is available."""

    def __init__(self, F: int):
        self.F = F
        self.parts = deque()
        self.offset = 0  # columns already consumed from parts[0]
        self.width = 0

    def push(self, chunk: np.ndarray):
        if chunk.shape[1]:
            self.parts.append(chunk)
            self.width += chunk.shape[1]

    def take(self, width: int) -> np.ndarray:
        """Remove and return the next ``width`` columns; only those are copied."""
        width = min(width, self.width)
        out = np.empty((self.F, width))
        filled = 0
        while filled < width:
            part = self.parts[0]
            count = min(width - filled, part.shape[1] - self.offset)
            out[:, filled:filled + count] = part[:, self.offset:self.offset + count]
            filled += count
            self.offset += count
            if self.offset == part.shape[1]:
                self.parts.popleft()
                self.offset = 0
        self.width -= width
        return out


def encrypt_stream(reader: Iterable, key: SecretKey, writer: Callable[[np.ndarray], None],
                   F: Optional[int] = None) -> int:
    """
    Encrypt a stream one block column at a time.

    Args:
        reader: iterable of chunks in time order; 1-D sample arrays for
            waveform keys, F x k column arrays for spectrogram keys
        key: secret key
        writer: called with each encrypted block column (F x M array, or an
            M-sample array for waveforms); a trailing partial column is zero
            padded like whole-signal encryption
        F: row count of 2-D chunks (taken from the first chunk when omitted)

    Returns:
        Number of blocks written

    Raises:
        StreamError: reader or writer failure, with the sample position reached
    """
    M = key.M
    buffer = None
    position = 0
    blocks = 0

    def emit(columns: np.ndarray):
        nonlocal blocks
        padded_F = columns.shape[0] if key.dims == 1 else -(-columns.shape[0] // M) * M
        data = np.zeros((padded_F, M))
        data[:columns.shape[0], :columns.shape[1]] = columns
        grid = BlockGrid(M=M, dims=key.dims, f=1 if key.dims == 1 else padded_F // M, t=1)
        encrypted = from_block_rows(transform_rows(to_block_rows(data, grid), key), grid)
        try:
            writer(encrypted.reshape(-1) if key.dims == 1 else encrypted)
        except Exception as e:
            raise StreamError(f"writer failed: {e}", position) from e
        blocks += grid.block_count

    iterator = iter(reader)
    while True:
        try:
            chunk = next(iterator)
        except StopIteration:
            break
        except Exception as e:
            raise StreamError(f"reader failed: {e}", position) from e

        chunk = np.asarray(chunk, dtype=np.float64)
        if key.dims == 1:
            chunk = chunk.reshape(1, -1)
        elif chunk.ndim != 2:
            raise ShapeError(f"2-D stream chunks must be F x k arrays, got shape {chunk.shape}")
        if not np.all(np.isfinite(chunk)):
            raise StreamError("non-finite sample in stream", position)
        if buffer is None:
            buffer = _ColumnBuffer(F if F is not None else chunk.shape[0])
        if chunk.shape[0] != buffer.F:
            raise ShapeError(f"stream chunk has {chunk.shape[0]} rows, expected {buffer.F}")

        buffer.push(chunk)
        position += chunk.shape[1]
        while buffer.width >= M:
            emit(buffer.take(M))

    if buffer is not None and buffer.width:
        emit(buffer.take(buffer.width))

    logger.debug(f"Streamed {position} columns into {blocks} blocks")
    return blocks
