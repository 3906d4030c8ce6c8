"""Shared fixtures for the speech cipher tests."""
import numpy as np
import pytest
from scipy.io import wavfile

from keys.householder import householder_qr, normalize_signs
from models import Signal

# 3x3 ROM key printed with four decimals; orthogonal only to that precision.
PRINTED_ROM_KEY = np.array([
    [0.9898, -0.0661, -0.1264],
    [0.1309, 0.7732, 0.6205],
    [0.0568, -0.6307, 0.7740],
])


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def waveform(rng):
    return Signal.waveform(rng.standard_normal(1003), sample_rate=16000)


@pytest.fixture
def spectrogram(rng):
    return Signal.spectrogram(np.abs(rng.standard_normal((13, 27))))


@pytest.fixture
def printed_rom_matrix():
    """The printed 3x3 key, re-orthonormalized to full precision."""
    Q, _ = normalize_signs(*householder_qr(PRINTED_ROM_KEY))
    return Q


@pytest.fixture
def wav_file(tmp_path, rng):
    """One second of float32 noise at 16 kHz."""
    path = tmp_path / "speech.wav"
    wavfile.write(path, 16000, (0.3 * rng.standard_normal(16000)).astype(np.float32))
    return path
