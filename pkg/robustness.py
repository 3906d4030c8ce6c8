"""
Wrong-key robustness experiments.

Wrong keys come from neighbouring seeds (seed+1, seed+2, ...). Each trial
measures how far a wrong-key decryption lands from the correct one, how far
the wrong-key encryption lands from the correct one, and how much the first
layer output of the encrypted model diverges when queried with the wrong key.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

import config
from encryptors.block_cipher import decrypt, encrypt
from encryptors.kernel_encryptor import measure_mismatch, random_kernel_bank
from errors import ShapeError, UsageError
from keys.generator import keygen
from keys.rng import SEED_LIMIT
from keys.secret_key import SecretKey
from models import METRIC_COLUMNS, Distance, KernelBank, RobustnessReport, Signal, TrialResult
from utils.block_utils import pad_signal

logger = logging.getLogger(__name__)

FLATNESS_FLOOR = 1e-20


def euclidean_distance(a: Signal, b: Signal) -> Distance:
    """
    sqrt(sum (a_i - b_i)^2), plus the same divided by ||a||.

    Raises:
        ShapeError: a and b differ in shape
    """
    if a.data.shape != b.data.shape:
        raise ShapeError(f"cannot compare signals of shape {a.data.shape} and {b.data.shape}")
    raw = float(np.linalg.norm(a.data - b.data))
    reference = float(np.linalg.norm(a.data))
    if reference == 0.0:
        normalized = 0.0 if raw == 0.0 else float('inf')
    else:
        normalized = raw / reference
    return Distance(raw=raw, normalized=normalized)


def wrong_seeds(seed: int, count: int, exclude: Optional[int] = None) -> List[int]:
    """``count`` seeds after ``seed`` (mod 2**64), skipping ``exclude``."""
    seeds = []
    candidate = seed
    while len(seeds) < count:
        candidate = (candidate + 1) % SEED_LIMIT
        if candidate != exclude:
            seeds.append(candidate)
    return seeds


def default_kernel_bank(key: SecretKey) -> KernelBank:
    """The fixed random first layer used when no bank is supplied."""
    return random_kernel_bank(config.KERNEL_CHANNELS, key.dims, key.M, seed=config.KERNEL_SEED)


def key_trials(signal: Signal, correct_key: SecretKey, candidates: Sequence[Tuple[Optional[int], SecretKey]],
               bank: Optional[KernelBank] = None, workers: int = 1) -> RobustnessReport:
    """
    Evaluate candidate query keys against ``correct_key``.

    Args:
        signal: plain signal
        correct_key: key of the encrypted signal and the encrypted model
        candidates: (seed, key) pairs; passing the correct key gives a control row
        bank: plain first-layer kernels (default: :func:`default_kernel_bank`)
        workers: threads evaluating trials; rows stay in trial order

    Returns:
        RobustnessReport with one row per candidate
    """
    bank = bank if bank is not None else default_kernel_bank(correct_key)
    encrypted = encrypt(signal, correct_key)
    reference = decrypt(encrypted, correct_key)

    def run_trial(item) -> TrialResult:
        index, (seed, key) = item
        decryption = euclidean_distance(reference, decrypt(encrypted, key))
        encryption = euclidean_distance(encrypted, encrypt(signal, key))
        return TrialResult(
            trial=index,
            seed=seed,
            decryption_distance=decryption.raw,
            normalized_decryption_distance=decryption.normalized,
            encryption_distance=encryption.raw,
            mismatch_divergence=measure_mismatch(signal, bank, correct_key, key),
        )

    items = list(enumerate(candidates))
    total = len(items)
    batch_size = max(1, 10 * workers)
    results: List[TrialResult] = []

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        for start in range(0, total, batch_size):
            batch = items[start:start + batch_size]
            logger.info(f"🔑 Trials {start + 1}-{start + len(batch)} of {total}...")
            results.extend(executor.map(run_trial, batch))

    return RobustnessReport(method=correct_key.method, M=correct_key.M, dims=correct_key.dims, trials=results)


def wrong_key_sweep(signal: Signal, correct_key: SecretKey, n_wrong: int, seed: Optional[int] = None,
                    bank: Optional[KernelBank] = None, workers: int = 1) -> RobustnessReport:
    """
    Run ``n_wrong`` trials with keys from seeds seed+1, seed+2, ...

    Args:
        signal: plain signal
        correct_key: the legitimate key
        n_wrong: number of wrong keys (>= 1)
        seed: base seed; defaults to the correct key's seed (or 0)
        bank: plain first-layer kernels
        workers: trial threads

    Returns:
        RobustnessReport, deterministic for fixed inputs
    """
    if n_wrong < 1:
        raise UsageError(f"n_wrong must be at least 1, got {n_wrong}")
    if seed is None:
        seed = correct_key.seed if correct_key.seed is not None else 0

    start_time = time.time()
    seeds = wrong_seeds(seed, n_wrong, exclude=correct_key.seed)
    candidates = [(s, keygen(correct_key.method, correct_key.M, correct_key.dims, s)) for s in seeds]
    report = key_trials(signal, correct_key, candidates, bank=bank, workers=workers)
    logger.info(f"⏱️  {n_wrong} wrong-key trials in {time.time() - start_time:.2f} seconds")
    return report


def spectral_flatness(signal: Signal) -> float:
    """
    Geometric over arithmetic mean of the power spectrum.

    1-D: rfft power of the whole signal. 2-D: per-frame power across the
    frequency axis, averaged over frames.
    """
    if signal.dims == 1:
        power = np.abs(np.fft.rfft(signal.samples)) ** 2
        columns = power.reshape(-1, 1)
    else:
        columns = signal.data ** 2
    columns = np.maximum(columns, FLATNESS_FLOOR)
    geometric = np.exp(np.mean(np.log(columns), axis=0))
    arithmetic = np.mean(columns, axis=0)
    return float(np.mean(geometric / arithmetic))


def block_size_sweep(signal: Signal, method: str, Ms: Sequence[int], seed: int = 0) -> pd.DataFrame:
    """
    Distortion of a signal encrypted at each block size.

    The table is informational: no monotonic trend is implied.

    Returns:
        DataFrame with block_size, N, distance, normalized_distance,
        flatness_plain, flatness_encrypted, flatness_change
    """
    rows = []
    for M in Ms:
        key = keygen(method, M, signal.dims, seed)
        _, padded = pad_signal(signal, M)
        encrypted = encrypt(signal, key)
        distance = euclidean_distance(padded, encrypted)
        flatness_plain = spectral_flatness(padded)
        flatness_encrypted = spectral_flatness(encrypted)
        rows.append({
            'block_size': M,
            'N': key.N,
            'distance': distance.raw,
            'normalized_distance': distance.normalized,
            'flatness_plain': flatness_plain,
            'flatness_encrypted': flatness_encrypted,
            'flatness_change': flatness_encrypted - flatness_plain,
        })
        logger.info(f"📊 M={M}: normalized distance {distance.normalized:.4f}, "
                    f"flatness {flatness_plain:.4f} -> {flatness_encrypted:.4f}")
    return pd.DataFrame(rows)


def report_to_csv(report: RobustnessReport) -> str:
    """Header row, one row per trial, then '#'-prefixed summary lines."""
    text = report.to_frame().to_csv(index=False, lineterminator='\n')
    if report.trials:
        summary = report.summary()
        lines = ["# statistic," + ",".join(METRIC_COLUMNS)]
        for statistic, values in summary.iterrows():
            lines.append(f"# {statistic}," + ",".join(repr(float(values[c])) for c in METRIC_COLUMNS))
        text += "\n".join(lines) + "\n"
    return text


def write_report(report: RobustnessReport, path) -> None:
    """Write a report as CSV, or as a two-sheet workbook for .xlsx paths."""
    path = Path(path)
    if path.parent != Path('.'):
        path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix.lower() == '.xlsx':
        with pd.ExcelWriter(path) as writer:
            report.to_frame().to_excel(writer, sheet_name='trials', index=False)
            report.summary().to_excel(writer, sheet_name='summary')
    else:
        path.write_text(report_to_csv(report), encoding='utf-8')
    logger.info(f"💾 Report saved to: {path}")


def write_table(table: pd.DataFrame, path) -> None:
    """Write a sweep table as CSV, or .xlsx."""
    path = Path(path)
    if path.parent != Path('.'):
        path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix.lower() == '.xlsx':
        table.to_excel(path, index=False)
    else:
        path.write_text(table.to_csv(index=False, lineterminator='\n'), encoding='utf-8')
    logger.info(f"💾 Table saved to: {path}")
