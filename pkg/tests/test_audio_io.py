import struct

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays
from scipy.io import wavfile

from audio.matrix_io import (
    HEADER, decode_matrix, encode_matrix, read_kernel_bank, read_matrix, read_matrix_signal,
    write_kernel_bank, write_matrix,
)
from audio.wav_io import read_wav, write_wav
from encryptors.kernel_encryptor import random_kernel_bank
from errors import InvalidSignal, MatrixFormatError, UnsupportedSignal, WavFormatError
from models import Kernel, Signal


# === WAV ===

def test_pcm16_is_scaled(tmp_path):
    wavfile.write(tmp_path / "pcm.wav", 8000, np.array([16384, -32768, 0], dtype=np.int16))
    signal = read_wav(tmp_path / "pcm.wav")
    assert signal.samples.tolist() == [0.5, -1.0, 0.0]
    assert (signal.dims, signal.sample_rate) == (1, 8000)


def test_empty_data_chunk(tmp_path):
    wavfile.write(tmp_path / "empty.wav", 16000, np.zeros(0, dtype=np.int16))
    assert read_wav(tmp_path / "empty.wav").T == 0


def test_float32_round_trip_is_bit_exact(wav_file, tmp_path):
    signal = read_wav(wav_file)
    write_wav(signal, tmp_path / "copy.wav")
    _, original = wavfile.read(wav_file)
    _, copy = wavfile.read(tmp_path / "copy.wav")
    assert copy.dtype == np.float32
    assert copy.tobytes() == original.tobytes()


def test_one_second_file_size(tmp_path):
    write_wav(Signal.waveform(np.zeros(16000), sample_rate=16000), tmp_path / "one.wav")
    assert (tmp_path / "one.wav").stat().st_size == 58 + 64000


def test_values_outside_unit_range_are_not_clipped(tmp_path):
    write_wav(Signal.waveform([3.5, -2.25], sample_rate=8000), tmp_path / "loud.wav")
    assert read_wav(tmp_path / "loud.wav").samples.tolist() == [3.5, -2.25]


def test_write_rejects_spectrogram(tmp_path):
    with pytest.raises(UnsupportedSignal):
        write_wav(Signal.spectrogram(np.ones((2, 2))), tmp_path / "x.wav")


def test_write_needs_sample_rate(tmp_path):
    with pytest.raises(UnsupportedSignal):
        write_wav(Signal.waveform([0.0]), tmp_path / "x.wav")


def test_non_finite_samples_rejected(tmp_path):
    with pytest.raises(InvalidSignal):
        Signal.waveform([0.0, np.nan], sample_rate=8000)
    with pytest.raises(InvalidSignal):
        write_wav(Signal.waveform([1e300], sample_rate=8000), tmp_path / "x.wav")


def test_stereo_rejected(tmp_path):
    wavfile.write(tmp_path / "stereo.wav", 8000, np.zeros((10, 2), dtype=np.int16))
    with pytest.raises(WavFormatError, match="mono"):
        read_wav(tmp_path / "stereo.wav")


def test_unsupported_bit_depth(tmp_path):
    wavfile.write(tmp_path / "pcm32.wav", 8000, np.zeros(10, dtype=np.int32))
    with pytest.raises(WavFormatError):
        read_wav(tmp_path / "pcm32.wav")


def test_not_a_wav_file(tmp_path):
    (tmp_path / "junk.wav").write_bytes(b"JUNK" * 20)
    with pytest.raises(WavFormatError):
        read_wav(tmp_path / "junk.wav")


def test_truncated_header(wav_file, tmp_path):
    (tmp_path / "cut.wav").write_bytes(wav_file.read_bytes()[:20])
    with pytest.raises(WavFormatError):
        read_wav(tmp_path / "cut.wav")


# === SPM1 MATRICES ===

def test_matrix_round_trip(tmp_path, rng):
    data = rng.standard_normal((4, 7))
    write_matrix(data, tmp_path / "m.spm")
    np.testing.assert_array_equal(read_matrix(tmp_path / "m.spm"), data)


def test_two_by_three_file_length(tmp_path):
    write_matrix(np.ones((2, 3)), tmp_path / "m.spm")
    payload = (tmp_path / "m.spm").read_bytes()
    assert len(payload) == 12 + 48
    assert payload[:4] == b"SPM1"
    assert struct.unpack("<II", payload[4:12]) == (2, 3)


def test_negative_zero_survives():
    decoded = decode_matrix(encode_matrix(np.array([[-0.0, 0.0]])))
    assert np.signbit(decoded[0, 0]) and not np.signbit(decoded[0, 1])


MATRIX_VALUES = st.one_of(
    st.floats(allow_nan=False, allow_infinity=False),
    st.sampled_from([-0.0, 5e-324, -5e-324, 2.2250738585072014e-308, -1.5e-310]),
)


@settings(max_examples=1000, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 5), st.integers(0, 6)), elements=MATRIX_VALUES))
def test_matrix_round_trip_is_bit_exact(matrix):
    assert decode_matrix(encode_matrix(matrix)).tobytes() == matrix.astype('<f8').tobytes()


def test_wrong_magic():
    payload = bytearray(encode_matrix(np.ones((1, 2))))
    payload[:4] = b"SPM2"
    with pytest.raises(MatrixFormatError, match="magic"):
        decode_matrix(bytes(payload))


def test_size_mismatch():
    with pytest.raises(MatrixFormatError):
        decode_matrix(encode_matrix(np.ones((2, 2)))[:-8])
    with pytest.raises(MatrixFormatError):
        decode_matrix(HEADER.pack(b"SPM1", 1, 1)[:6])


def test_matrix_signal_dims(tmp_path):
    write_matrix(Signal.waveform([1.0, 2.0]), tmp_path / "wave.spm")
    write_matrix(Signal.spectrogram(np.ones((3, 2))), tmp_path / "spec.spm")
    assert read_matrix_signal(tmp_path / "wave.spm", sample_rate=8000).dims == 1
    assert read_matrix_signal(tmp_path / "spec.spm").dims == 2


def test_kernel_file(tmp_path):
    write_matrix(Kernel(np.eye(3)), tmp_path / "k.spm")
    np.testing.assert_array_equal(read_matrix(tmp_path / "k.spm"), np.eye(3))


# === KERNEL BANKS ===

def test_kernel_bank_directory_round_trip(tmp_path):
    bank = random_kernel_bank(3, 2, 4, seed=1)
    manifest = write_kernel_bank(bank, tmp_path / "bank")
    assert manifest.name == "manifest.yaml"
    loaded = read_kernel_bank(tmp_path / "bank")
    np.testing.assert_array_equal(loaded.weights_matrix(), bank.weights_matrix())
    assert loaded.biases() == bank.biases()


def test_kernel_bank_needs_manifest(tmp_path):
    (tmp_path / "bank").mkdir()
    with pytest.raises(MatrixFormatError):
        read_kernel_bank(tmp_path / "bank")


def test_kernel_bank_patch_size_checked(tmp_path):
    write_kernel_bank(random_kernel_bank(2, 1, 4), tmp_path / "bank")
    manifest = tmp_path / "bank" / "manifest.yaml"
    manifest.write_text(manifest.read_text(encoding='utf-8').replace("patch_size: 4", "patch_size: 5"),
                        encoding='utf-8')
    with pytest.raises(MatrixFormatError, match="patch_size"):
        read_kernel_bank(tmp_path / "bank")
