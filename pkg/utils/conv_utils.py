"""
Stride-P patch convolution: the first layer of a model whose kernel size,
stride and cipher block size coincide.
"""
import math

import numpy as np

from errors import PatchSizeMismatch, ShapeError
from models import Block, Kernel, KernelBank, Signal
from utils.block_utils import pad_signal, to_block_rows


def patch_inner_products(rows: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """
    Inner product of every row of ``rows`` (B x N) with every row of
    ``weights`` (C x N), returned as B x C.

    Each sum is correctly rounded (math.fsum), so the result depends neither
    on the order of the N terms nor on how many rows are processed together.
    """
    rows = np.asarray(rows, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    if rows.ndim != 2 or weights.ndim != 2 or rows.shape[1] != weights.shape[1]:
        raise ShapeError(f"patch shape {rows.shape} does not match kernel shape {weights.shape}")
    B, C = rows.shape[0], weights.shape[0]
    out = np.zeros((B, C), dtype=np.float64)
    for b in range(B):
        products = (weights * rows[b]).tolist()
        out[b] = [math.fsum(terms) for terms in products]
    return out


def patch_conv(block: Block, kernel: Kernel) -> float:
    """
    Convolve one block with one kernel at a single position.

    Returns:
        sum of elementwise products, plus the bias if the kernel has one

    Raises:
        ShapeError: block and kernel shapes differ
    """
    if block.values.shape != kernel.weights.shape:
        raise ShapeError(
            f"block shape {block.values.shape} does not match kernel shape {kernel.weights.shape}"
        )
    z = patch_inner_products(block.values.reshape(1, -1), kernel.weights.reshape(1, -1))[0, 0]
    if kernel.bias is not None:
        z += kernel.bias
    return float(z)


def first_layer_forward(signal: Signal, bank: KernelBank, M: int) -> np.ndarray:
    """
    Non-overlapping stride-P convolution of a signal with a kernel bank.

    Args:
        signal: waveform or spectrogram (zero padded to multiples of M)
        bank: C_out kernels with patch size P
        M: block size; must equal P

    Returns:
        f x t x C_out feature map, output[i, j, c] = patch_conv(block_ij, kernel_c)

    Raises:
        PatchSizeMismatch: P != M
        ShapeError: kernel shape does not match the block shape
    """
    if bank.P != M:
        raise PatchSizeMismatch(f"kernel patch size {bank.P} differs from block size {M}")
    grid, padded = pad_signal(signal, M)
    if (bank.a, bank.b) != (grid.n, grid.m):
        raise ShapeError(
            f"kernels are {bank.a} x {bank.b} but {signal.dims}-D blocks are {grid.n} x {grid.m}"
        )
    rows = to_block_rows(padded.data, grid)
    z = patch_inner_products(rows, bank.weights_matrix()) + bank.bias_vector()
    return z.reshape(grid.f, grid.t, bank.C_out)
