"""
Magnitude STFT front-end producing 2-D carriers for encryption.
"""
import logging
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.signal import get_window

from errors import TooShort, UnsupportedSignal, UsageError
from models import Signal

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StftConfig:
    """Frame length and hop in samples; periodic Hann window."""
    window_length: int = 512
    hop: int = 128
    window: str = "hann"

    def __post_init__(self):
        if self.window_length < 2:
            raise UsageError(f"window length must be at least 2, got {self.window_length}")
        if not 0 < self.hop <= self.window_length:
            raise UsageError(f"hop must be in (0, {self.window_length}], got {self.hop}")

    @property
    def bins(self) -> int:
        return self.window_length // 2 + 1

    def frame_count(self, T: int) -> int:
        """1 + floor((T - window_length) / hop) for T >= window_length."""
        return 1 + (T - self.window_length) // self.hop


def stft_magnitude(signal: Signal, cfg: StftConfig) -> Signal:
    """
    Magnitude spectrogram of a waveform.

    Returns:
        dims=2 signal with F = window_length // 2 + 1 rows and one column per frame

    Raises:
        UnsupportedSignal: input is already 2-D
        TooShort: fewer samples than one window
    """
    if signal.dims != 1:
        raise UnsupportedSignal("the STFT needs a 1-D waveform")
    if signal.T < cfg.window_length:
        raise TooShort(f"{signal.T} samples is shorter than the {cfg.window_length}-sample window")

    window = get_window(cfg.window, cfg.window_length)
    frames = sliding_window_view(signal.samples, cfg.window_length)[::cfg.hop]
    magnitude = np.abs(np.fft.rfft(frames * window, axis=-1)).T
    logger.info(f"📊 STFT: {magnitude.shape[1]} frames x {magnitude.shape[0]} bins")
    return Signal(magnitude, dims=2)


def frame_energy(signal: Signal, cfg: StftConfig) -> float:
    """Energy of the windowed frames, the time-domain side of Parseval's identity."""
    window = get_window(cfg.window, cfg.window_length)
    frames = sliding_window_view(signal.samples, cfg.window_length)[::cfg.hop]
    return float(np.sum((frames * window) ** 2))


def spectrogram_energy(spectrogram: Signal, window_length: int) -> float:
    """Energy of a one-sided magnitude spectrogram, counting mirrored bins twice."""
    power = spectrogram.data ** 2
    weights = np.full(power.shape[0], 2.0)
    weights[0] = 1.0
    if window_length % 2 == 0:
        weights[-1] = 1.0
    return float(np.sum(weights[:, None] * power) / window_length)
