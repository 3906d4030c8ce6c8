"""
Block tiling utilities: zero padding, partitioning, flatten and reshape.

Blocks are enumerated in row-major block order (block row i, then block
column j), and flattening is row-major within a block.
"""
from typing import List, Tuple

import numpy as np

from errors import InvalidBlockSize, ShapeError
from models import Block, BlockGrid, Signal


def _round_up(length: int, M: int) -> int:
    return -(-length // M) * M


def make_grid(signal: Signal, M: int) -> BlockGrid:
    """
    Compute the block grid of ``signal`` after zero padding to multiples of M.

    Raises:
        InvalidBlockSize: M < 1 or M larger than a padded axis
    """
    if not isinstance(M, (int, np.integer)) or isinstance(M, bool) or M < 1:
        raise InvalidBlockSize(f"block size must be a positive integer, got {M!r}")
    M = int(M)
    padded_T = _round_up(signal.T, M)
    padded_F = 1 if signal.dims == 1 else _round_up(signal.F, M)
    if M > padded_T or (signal.dims == 2 and M > padded_F):
        raise InvalidBlockSize(
            f"block size {M} exceeds padded signal shape {padded_F} x {padded_T}"
        )
    f = 1 if signal.dims == 1 else padded_F // M
    return BlockGrid(M=M, dims=signal.dims, f=f, t=padded_T // M)


def pad_signal(signal: Signal, M: int) -> Tuple[BlockGrid, Signal]:
    """
    Zero-pad each blocked axis up to the next multiple of M.

    The returned signal records the pre-padding lengths (inherited when the
    input already carries them).
    """
    grid = make_grid(signal, M)
    rows, cols = grid.padded_shape
    data = signal.data
    if data.shape != (rows, cols):
        data = np.pad(data, ((0, rows - signal.F), (0, cols - signal.T)))
    padded = signal.with_data(
        data,
        original_T=signal.original_T if signal.original_T is not None else signal.T,
        original_F=signal.original_F if signal.original_F is not None else signal.F,
    )
    return grid, padded


def to_block_rows(data: np.ndarray, grid: BlockGrid) -> np.ndarray:
    """Padded F x T data -> (f*t) x N matrix, one flattened block per row."""
    n, m = grid.n, grid.m
    tiles = data.reshape(grid.f, n, grid.t, m).transpose(0, 2, 1, 3)
    return np.ascontiguousarray(tiles).reshape(grid.block_count, grid.N)


def from_block_rows(rows: np.ndarray, grid: BlockGrid) -> np.ndarray:
    """Inverse of :func:`to_block_rows`."""
    n, m = grid.n, grid.m
    tiles = np.asarray(rows).reshape(grid.f, grid.t, n, m).transpose(0, 2, 1, 3)
    return np.ascontiguousarray(tiles).reshape(grid.f * n, grid.t * m)


def partition(signal: Signal, M: int) -> Tuple[BlockGrid, List[Block]]:
    """
    Split a signal into M-sized blocks.

    Args:
        signal: waveform or spectrogram
        M: block size

    Returns:
        Tuple of (grid, blocks) with f*t blocks in row-major block order
    """
    grid, padded = pad_signal(signal, M)
    n, m = grid.n, grid.m
    blocks = [
        Block(padded.data[i * n:(i + 1) * n, j * m:(j + 1) * m])
        for i in range(grid.f)
        for j in range(grid.t)
    ]
    return grid, blocks


def reassemble(grid: BlockGrid, blocks: List[Block]) -> np.ndarray:
    """Concatenate row-major ordered blocks back into the padded F x T matrix."""
    if len(blocks) != grid.block_count:
        raise ShapeError(f"expected {grid.block_count} blocks, got {len(blocks)}")
    rows = [np.hstack([blocks[i * grid.t + j].values for j in range(grid.t)]) for i in range(grid.f)]
    return np.vstack(rows)


def flatten(block: Block) -> np.ndarray:
    """Row-major flattening: index i*m + j holds element (i, j)."""
    return block.values.reshape(-1).copy()


def reshape(vector, n: int, m: int) -> Block:
    """
    Inverse of :func:`flatten`.

    Raises:
        ShapeError: len(vector) != n*m
    """
    vector = np.asarray(vector, dtype=np.float64)
    if vector.ndim != 1 or vector.size != n * m:
        raise ShapeError(f"cannot reshape vector of shape {vector.shape} into {n} x {m}")
    return Block(vector.reshape(n, m))


def trim_signal(signal: Signal) -> Signal:
    """Drop trailing zero padding using the recorded original lengths."""
    T = signal.original_T if signal.original_T is not None else signal.T
    F = signal.original_F if signal.original_F is not None else signal.F
    return signal.with_data(signal.data[:F, :T], original_T=None, original_F=None)
