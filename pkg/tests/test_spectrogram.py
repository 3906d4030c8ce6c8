import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from audio.spectrogram import StftConfig, frame_energy, spectrogram_energy, stft_magnitude
from errors import TooShort, UnsupportedSignal, UsageError
from models import Signal


def test_frame_count_example():
    cfg = StftConfig(window_length=256, hop=128)
    spec = stft_magnitude(Signal.waveform(np.zeros(1024)), cfg)
    assert cfg.frame_count(1024) == 7
    assert spec.data.shape == (129, 7)
    assert spec.dims == 2


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 64), st.data())
def test_frame_count_formula(window, data):
    hop = data.draw(st.integers(1, window))
    T = data.draw(st.integers(window, 4 * window))
    spec = stft_magnitude(Signal.waveform(np.ones(T)), StftConfig(window_length=window, hop=hop))
    assert spec.T == 1 + (T - window) // hop
    assert spec.F == window // 2 + 1


def test_zero_input_gives_zero_spectrogram():
    spec = stft_magnitude(Signal.waveform(np.zeros(2048)), StftConfig())
    assert not spec.data.any()


def test_bin_centred_sine_dominates_its_row():
    window, k = 256, 10
    n = np.arange(4096)
    spec = stft_magnitude(Signal.waveform(np.sin(2 * np.pi * k * n / window)), StftConfig(window, 64))
    assert np.all(np.argmax(spec.data, axis=0) == k)
    assert np.all(spec.data[k] >= 1.9 * spec.data[k - 1])
    assert np.all(spec.data[k] >= 1.9 * spec.data[k + 1])
    far = np.delete(spec.data, [k - 1, k, k + 1], axis=0)
    assert far.max() <= 1e-9 * spec.data[k].max()


def test_parseval_for_white_noise(rng):
    signal = Signal.waveform(rng.standard_normal(8000))
    cfg = StftConfig(window_length=512, hop=128)
    spec = stft_magnitude(signal, cfg)
    assert spectrogram_energy(spec, cfg.window_length) == pytest.approx(frame_energy(signal, cfg), rel=0.05)


def test_too_short():
    with pytest.raises(TooShort):
        stft_magnitude(Signal.waveform(np.ones(100)), StftConfig(window_length=256))


def test_needs_waveform():
    with pytest.raises(UnsupportedSignal):
        stft_magnitude(Signal.spectrogram(np.ones((3, 600))), StftConfig())


@pytest.mark.parametrize("window,hop", [(0, 1), (1, 1), (256, 0), (256, 300)])
def test_invalid_config(window, hop):
    with pytest.raises(UsageError):
        StftConfig(window_length=window, hop=hop)


def test_shortest_window_keeps_spectrogram_distinct_from_waveform():
    cfg = StftConfig(window_length=2, hop=1)
    spec = stft_magnitude(Signal.waveform(np.arange(5.0)), cfg)
    assert spec.data.shape == (2, 4)
