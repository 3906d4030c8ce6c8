import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from errors import PatchSizeMismatch, ShapeError
from models import Block, Kernel, KernelBank, Signal
from utils.block_utils import partition
from utils.conv_utils import first_layer_forward, patch_conv

small = st.floats(min_value=-100.0, max_value=100.0, allow_nan=False)


def test_zero_block_gives_bias():
    assert patch_conv(Block(np.zeros((1, 3))), Kernel([[1.0, 2.0, 3.0]], bias=0.25)) == 0.25
    assert patch_conv(Block(np.zeros((1, 3))), Kernel([[1.0, 2.0, 3.0]])) == 0.0


def test_hand_computed_patch():
    assert patch_conv(Block([[1.0, 2.0]]), Kernel([[3.0, 4.0]])) == 11.0


def test_square_patch_matches_double_sum(rng):
    X, E = rng.standard_normal((2, 2)), rng.standard_normal((2, 2))
    expected = sum(X[i, j] * E[i, j] for i in range(2) for j in range(2))
    assert patch_conv(Block(X), Kernel(E)) == pytest.approx(expected, rel=1e-15)


def test_shape_mismatch():
    with pytest.raises(ShapeError):
        patch_conv(Block([[1.0, 2.0]]), Kernel([[1.0, 2.0, 3.0]]))


def test_forward_matches_per_block_calls(rng):
    signal = Signal.waveform(rng.standard_normal(6))
    kernel = Kernel(rng.standard_normal((1, 3)), bias=0.5)
    out = first_layer_forward(signal, KernelBank([kernel]), 3)
    _, blocks = partition(signal, 3)
    assert out.shape == (1, 2, 1)
    assert out[0, :, 0].tolist() == [patch_conv(b, kernel) for b in blocks]


def test_forward_equals_naive_loop_on_spectrogram(rng):
    signal = Signal.spectrogram(rng.standard_normal((9, 10)))
    bank = KernelBank([Kernel(rng.standard_normal((3, 3)), bias=b) for b in (0.1, None)])
    out = first_layer_forward(signal, bank, 3)
    grid, blocks = partition(signal, 3)
    for i in range(grid.f):
        for j in range(grid.t):
            for c, kernel in enumerate(bank.kernels):
                assert out[i, j, c] == patch_conv(blocks[i * grid.t + j], kernel)


def test_forward_shape():
    bank = KernelBank([Kernel(np.ones((4, 4))) for _ in range(3)])
    assert first_layer_forward(Signal.spectrogram(np.ones((8, 8))), bank, 4).shape == (2, 2, 3)


def test_zero_kernel_gives_zero_map(rng):
    out = first_layer_forward(Signal.waveform(rng.standard_normal(12)), KernelBank([Kernel(np.zeros((1, 4)))]), 4)
    assert not out.any()


def test_patch_size_must_match_block_size():
    with pytest.raises(PatchSizeMismatch):
        first_layer_forward(Signal.waveform(np.ones(6)), KernelBank([Kernel(np.ones((1, 2)))]), 3)


def test_kernel_dimensionality_must_match_signal():
    with pytest.raises(ShapeError):
        first_layer_forward(Signal.waveform(np.ones(6)), KernelBank([Kernel(np.ones((3, 3)))]), 3)


@given(arrays(np.float64, (2, 2), elements=small), arrays(np.float64, (2, 2), elements=small),
       small, small, arrays(np.float64, (2, 2), elements=small))
def test_patch_conv_is_bilinear(X, Y, alpha, beta, E):
    kernel = Kernel(E)
    lhs = patch_conv(Block(alpha * X + beta * Y), kernel)
    rhs = alpha * patch_conv(Block(X), kernel) + beta * patch_conv(Block(Y), kernel)
    scale = abs(alpha) * np.abs(X * E).sum() + abs(beta) * np.abs(Y * E).sum()
    assert abs(lhs - rhs) <= 1e-12 * max(scale, 1.0)
