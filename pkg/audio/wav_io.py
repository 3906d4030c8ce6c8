"""
WAV reading and writing.

Reads mono PCM 16-bit or IEEE float 32-bit files; always writes IEEE float
32-bit so encrypted waveforms that leave [-1, 1] are stored unclipped.
"""
import logging
import struct
import warnings

import numpy as np
from scipy.io import wavfile

from errors import InvalidSignal, UnsupportedSignal, WavFormatError
from models import Signal

logger = logging.getLogger(__name__)

PCM16_SCALE = 32768.0


def read_wav(path) -> Signal:
    """
    Read a mono WAV file as a 1-D signal.

    PCM 16-bit samples are divided by 32768; float32 samples are widened to
    float64 exactly.

    Raises:
        WavFormatError: multi-channel audio, unsupported codec or bit depth,
            truncated or malformed chunks
    """
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", wavfile.WavFileWarning)
            sample_rate, data = wavfile.read(path)
    except (ValueError, EOFError, struct.error, wavfile.WavFileWarning) as e:
        raise WavFormatError(f"{path}: {e}") from e

    if data.ndim != 1:
        raise WavFormatError(f"{path}: expected mono audio, got {data.shape[1]} channels")
    if data.dtype == np.int16:
        samples = data.astype(np.float64) / PCM16_SCALE
    elif data.dtype == np.float32:
        samples = data.astype(np.float64)
    else:
        raise WavFormatError(f"{path}: unsupported sample format {data.dtype}; expected PCM16 or float32")

    try:
        signal = Signal.waveform(samples, sample_rate=int(sample_rate))
    except InvalidSignal as e:
        raise WavFormatError(f"{path}: {e}") from e
    logger.info(f"📂 Read {signal.T} samples at {sample_rate} Hz from {path}")
    return signal


def write_wav(signal: Signal, path) -> None:
    """
    Write a waveform as IEEE float 32-bit mono WAV; no clipping or dithering.

    Raises:
        UnsupportedSignal: 2-D signal or missing sample rate
        InvalidSignal: samples not representable as finite float32
    """
    if signal.dims != 1:
        raise UnsupportedSignal("only 1-D waveforms can be written as WAV")
    if not signal.sample_rate:
        raise UnsupportedSignal("waveform has no sample rate")
    samples = signal.samples.astype(np.float32)
    if not np.all(np.isfinite(samples)):
        raise InvalidSignal("waveform does not fit in float32")
    wavfile.write(path, int(signal.sample_rate), samples)
    logger.info(f"💾 Wrote {signal.T} float32 samples to {path}")
