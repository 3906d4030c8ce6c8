"""
SPM1 matrix files and kernel-bank directories.

SPM1 layout (little-endian regardless of host):

    bytes 0-3    magic b"SPM1"
    bytes 4-7    rows, uint32
    bytes 8-11   cols, uint32
    bytes 12-    rows*cols float64, row-major
"""
import logging
import struct
from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from errors import MatrixFormatError, ShapeError
from models import Kernel, KernelBank, Signal

logger = logging.getLogger(__name__)

MAGIC = b"SPM1"
HEADER = struct.Struct("<4sII")
MANIFEST_NAME = "manifest.yaml"


def encode_matrix(matrix) -> bytes:
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim == 1:
        matrix = matrix.reshape(1, -1)
    if matrix.ndim != 2:
        raise ShapeError(f"only 2-D matrices can be stored, got shape {matrix.shape}")
    rows, cols = matrix.shape
    return HEADER.pack(MAGIC, rows, cols) + matrix.astype('<f8').tobytes(order='C')


def decode_matrix(payload: bytes) -> np.ndarray:
    """
    Raises:
        MatrixFormatError: short header, bad magic, or size mismatch
    """
    if len(payload) < HEADER.size:
        raise MatrixFormatError(f"file is {len(payload)} bytes, shorter than the {HEADER.size}-byte header")
    magic, rows, cols = HEADER.unpack_from(payload)
    if magic != MAGIC:
        raise MatrixFormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
    expected = HEADER.size + rows * cols * 8
    if len(payload) != expected:
        raise MatrixFormatError(
            f"declared {rows} x {cols} needs {expected} bytes, file has {len(payload)}"
        )
    if rows * cols == 0:
        return np.zeros((rows, cols), dtype=np.float64)
    values = np.frombuffer(payload, dtype='<f8', offset=HEADER.size, count=rows * cols)
    return values.astype(np.float64).reshape(rows, cols)


def write_matrix(value, path) -> None:
    """Write a Signal, Kernel or array as an SPM1 file."""
    if isinstance(value, Signal):
        matrix = value.data
    elif isinstance(value, Kernel):
        matrix = value.weights
    else:
        matrix = value
    Path(path).write_bytes(encode_matrix(matrix))
    logger.debug(f"Wrote matrix {np.shape(matrix)} to {path}")


def read_matrix(path) -> np.ndarray:
    return decode_matrix(Path(path).read_bytes())


def read_matrix_signal(path, sample_rate: Optional[int] = None) -> Signal:
    """An SPM1 file as a signal: one row is a waveform, more rows a spectrogram."""
    matrix = read_matrix(path)
    dims = 1 if matrix.shape[0] == 1 else 2
    return Signal(matrix, dims=dims, sample_rate=sample_rate if dims == 1 else None)


def write_kernel_bank(bank: KernelBank, directory) -> Path:
    """
    Store one SPM1 file per kernel plus ``manifest.yaml``.

    Returns:
        Path of the manifest
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    entries = []
    for index, kernel in enumerate(bank.kernels):
        name = f"kernel_{index:03d}.spm"
        write_matrix(kernel, directory / name)
        entries.append({'file': name, 'bias': kernel.bias})
    manifest = {'patch_size': bank.P, 'dims': bank.dims, 'kernels': entries}
    manifest_path = directory / MANIFEST_NAME
    with open(manifest_path, 'w', encoding='utf-8') as f:
        yaml.safe_dump(manifest, f, sort_keys=False)
    logger.info(f"💾 Wrote {bank.C_out} kernels to {directory}")
    return manifest_path


def read_kernel_bank(directory) -> KernelBank:
    """
    Raises:
        MatrixFormatError: missing or inconsistent manifest, bad kernel files
    """
    directory = Path(directory)
    manifest_path = directory / MANIFEST_NAME
    if not manifest_path.exists():
        raise MatrixFormatError(f"no {MANIFEST_NAME} in {directory}")
    try:
        with open(manifest_path, 'r', encoding='utf-8') as f:
            manifest = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise MatrixFormatError(f"{manifest_path}: {e}") from e
    if not isinstance(manifest, dict) or not isinstance(manifest.get('kernels'), list):
        raise MatrixFormatError(f"{manifest_path}: expected a mapping with a 'kernels' list")

    kernels = []
    for index, entry in enumerate(manifest['kernels']):
        if not isinstance(entry, dict) or 'file' not in entry:
            raise MatrixFormatError(f"{manifest_path}: kernels[{index}] needs a 'file'")
        try:
            kernels.append(Kernel(read_matrix(directory / entry['file']), entry.get('bias')))
        except ShapeError as e:
            raise MatrixFormatError(f"{entry['file']}: {e}") from e
    try:
        bank = KernelBank(kernels)
    except ShapeError as e:
        raise MatrixFormatError(f"{manifest_path}: {e}") from e

    patch_size = manifest.get('patch_size')
    if patch_size is not None and patch_size != bank.P:
        raise MatrixFormatError(f"{manifest_path}: patch_size {patch_size} but kernels have P={bank.P}")
    logger.info(f"📂 Loaded {bank.C_out} kernels ({bank.a} x {bank.b}) from {directory}")
    return bank
