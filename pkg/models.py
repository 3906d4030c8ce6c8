"""
Data models for block-wise speech encryption.
"""
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from errors import InvalidSignal, ShapeError


def _frozen_array(values, ndim: int, name: str) -> np.ndarray:
    """Copy ``values`` into a read-only C-ordered float64 array of ``ndim`` dims."""
    array = np.array(values, dtype=np.float64, order='C')
    if array.ndim == 1 and ndim == 2:
        array = array.reshape(1, -1)
    if array.ndim != ndim:
        raise ShapeError(f"{name} must be {ndim}-dimensional, got shape {array.shape}")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Signal:
    """
    A waveform (dims=1, F=1) or spectrogram (dims=2) held as an F x T matrix.

    ``original_T``/``original_F`` record the lengths before zero padding so a
    decrypted signal can be trimmed back to its input shape.
    """
    data: np.ndarray
    dims: int = 1
    sample_rate: Optional[int] = None
    original_T: Optional[int] = None
    original_F: Optional[int] = None

    def __post_init__(self):
        if self.dims not in (1, 2):
            raise ShapeError(f"dims must be 1 or 2, got {self.dims}")
        data = _frozen_array(self.data, 2, "signal data")
        if self.dims == 1 and data.shape[0] != 1:
            raise ShapeError(f"a 1-D signal must have F=1, got F={data.shape[0]}")
        if not np.all(np.isfinite(data)):
            raise InvalidSignal("signal contains NaN or infinite values")
        object.__setattr__(self, 'data', data)

    @classmethod
    def waveform(cls, samples, sample_rate: Optional[int] = None) -> "Signal":
        """Build a 1-D signal from a flat sample sequence."""
        return cls(np.asarray(samples, dtype=np.float64).reshape(1, -1), dims=1, sample_rate=sample_rate)

    @classmethod
    def spectrogram(cls, matrix) -> "Signal":
        """Build a 2-D signal from an F x T matrix."""
        return cls(matrix, dims=2)

    @property
    def F(self) -> int:
        return self.data.shape[0]

    @property
    def T(self) -> int:
        return self.data.shape[1]

    @property
    def samples(self) -> np.ndarray:
        """Flat view of a waveform's samples."""
        return self.data.reshape(-1)

    def with_data(self, data, **changes) -> "Signal":
        """Copy of this signal with new values (metadata kept unless overridden)."""
        return replace(self, data=data, **changes)


@dataclass(frozen=True)
class BlockGrid:
    """The M-sized tiling of a (padded) signal: f block rows by t block columns."""
    M: int
    dims: int
    f: int
    t: int

    @property
    def n(self) -> int:
        return 1 if self.dims == 1 else self.M

    @property
    def m(self) -> int:
        return self.M

    @property
    def N(self) -> int:
        return self.n * self.m

    @property
    def block_count(self) -> int:
        return self.f * self.t

    @property
    def padded_shape(self) -> tuple:
        return (self.f * self.n, self.t * self.m)


@dataclass(frozen=True, eq=False)
class Block:
    """One n x m tile of a signal."""
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'values', _frozen_array(self.values, 2, "block"))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    @property
    def N(self) -> int:
        return self.n * self.m


@dataclass(frozen=True, eq=False)
class Kernel:
    """
    One first-layer convolution kernel.

    A 1-D kernel is 1 x P, a 2-D kernel is P x P; the patch size P is the
    column count in both cases.
    """
    weights: np.ndarray
    bias: Optional[float] = None

    def __post_init__(self):
        weights = _frozen_array(self.weights, 2, "kernel weights")
        a, b = weights.shape
        if a != 1 and a != b:
            raise ShapeError(f"kernel must be 1 x P or P x P, got {a} x {b}")
        if not np.all(np.isfinite(weights)):
            raise InvalidSignal("kernel contains NaN or infinite values")
        object.__setattr__(self, 'weights', weights)
        if self.bias is not None:
            object.__setattr__(self, 'bias', float(self.bias))

    @property
    def a(self) -> int:
        return self.weights.shape[0]

    @property
    def b(self) -> int:
        return self.weights.shape[1]

    @property
    def P(self) -> int:
        return self.b

    @property
    def N(self) -> int:
        return self.a * self.b


@dataclass(frozen=True, eq=False)
class KernelBank:
    """C_out kernels of identical shape, as in a real first layer."""
    kernels: Sequence[Kernel]

    def __post_init__(self):
        kernels = tuple(self.kernels)
        if not kernels:
            raise ShapeError("a kernel bank needs at least one kernel")
        shape = kernels[0].weights.shape
        for index, kernel in enumerate(kernels):
            if kernel.weights.shape != shape:
                raise ShapeError(
                    f"kernel {index} has shape {kernel.weights.shape}, expected {shape}"
                )
        object.__setattr__(self, 'kernels', kernels)

    @classmethod
    def from_matrix(cls, weights: np.ndarray, a: int, b: int, biases=None) -> "KernelBank":
        """Build a bank from a C_out x (a*b) matrix of flattened kernels."""
        weights = np.asarray(weights, dtype=np.float64)
        if weights.ndim != 2 or weights.shape[1] != a * b:
            raise ShapeError(f"expected C_out x {a * b} weights, got shape {weights.shape}")
        if biases is None:
            biases = [None] * weights.shape[0]
        return cls([Kernel(row.reshape(a, b), bias) for row, bias in zip(weights, biases)])

    @property
    def C_out(self) -> int:
        return len(self.kernels)

    @property
    def a(self) -> int:
        return self.kernels[0].a

    @property
    def b(self) -> int:
        return self.kernels[0].b

    @property
    def P(self) -> int:
        return self.kernels[0].P

    @property
    def N(self) -> int:
        return self.kernels[0].N

    @property
    def dims(self) -> int:
        return 1 if self.a == 1 else 2

    def weights_matrix(self) -> np.ndarray:
        """C_out x N matrix, one flattened kernel per row."""
        return np.stack([kernel.weights.reshape(-1) for kernel in self.kernels])

    def biases(self) -> List[Optional[float]]:
        return [kernel.bias for kernel in self.kernels]

    def bias_vector(self) -> np.ndarray:
        """Biases with absent ones read as zero."""
        return np.array([kernel.bias or 0.0 for kernel in self.kernels], dtype=np.float64)


@dataclass(frozen=True)
class Distance:
    """Euclidean distance between two signals, raw and divided by the reference norm."""
    raw: float
    normalized: float


@dataclass
class TrialResult:
    """One wrong-key trial."""
    trial: int
    seed: Optional[int]
    decryption_distance: float
    normalized_decryption_distance: float
    encryption_distance: float
    mismatch_divergence: float

    def to_dict(self) -> Dict:
        """Convert to dictionary for DataFrame."""
        return {
            'trial': self.trial,
            'seed': self.seed,
            'decryption_distance': self.decryption_distance,
            'normalized_decryption_distance': self.normalized_decryption_distance,
            'encryption_distance': self.encryption_distance,
            'mismatch_divergence': self.mismatch_divergence,
        }


METRIC_COLUMNS = [
    'decryption_distance',
    'normalized_decryption_distance',
    'encryption_distance',
    'mismatch_divergence',
]


@dataclass
class RobustnessReport:
    """Per-trial results of a wrong-key sweep; summary is always recomputed from rows."""
    method: str
    M: int
    dims: int
    trials: List[TrialResult] = field(default_factory=list)

    @property
    def n_trials(self) -> int:
        return len(self.trials)

    def to_frame(self) -> pd.DataFrame:
        """Trial rows ordered by trial index."""
        rows = [trial.to_dict() for trial in sorted(self.trials, key=lambda t: t.trial)]
        return pd.DataFrame(rows, columns=['trial', 'seed'] + METRIC_COLUMNS)

    def summary(self) -> pd.DataFrame:
        """mean/median/min/max/variance per metric (population variance)."""
        frame = self.to_frame()[METRIC_COLUMNS].astype(np.float64)
        return pd.DataFrame({
            'mean': frame.mean(),
            'median': frame.median(),
            'min': frame.min(),
            'max': frame.max(),
            'variance': frame.var(ddof=0),
        }).T

    def __str__(self) -> str:
        """Format summary for display."""
        lines = [
            "\n" + "=" * 60,
            "WRONG-KEY ROBUSTNESS",
            "=" * 60,
            f"Method: {self.method}  M: {self.M}  dims: {self.dims}",
            f"Trials: {self.n_trials}",
        ]
        if self.trials:
            summary = self.summary()
            for column in METRIC_COLUMNS:
                lines.append(
                    f"  - {column}: mean={summary.loc['mean', column]:.4f} "
                    f"median={summary.loc['median', column]:.4f} "
                    f"min={summary.loc['min', column]:.4f} "
                    f"max={summary.loc['max', column]:.4f}"
                )
        lines.append("=" * 60)
        return "\n".join(lines)
