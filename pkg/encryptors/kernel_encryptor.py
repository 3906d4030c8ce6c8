"""
First-layer kernel encryption and the cancellation checks.

A kernel encrypted with the same key as the query gives the same patch
inner products as the plain kernel on the plain query, because every key
is an orthogonal operator on the flattened patch.
"""
import logging
from typing import Optional, Sequence

import numpy as np

from errors import KeyMismatch, PatchSizeMismatch, ShapeError
from encryptors.block_cipher import check_key, encrypt, transform_rows
from keys.rng import make_rng
from keys.secret_key import SecretKey
from models import KernelBank, Signal
from utils.conv_utils import first_layer_forward

logger = logging.getLogger(__name__)


def encrypt_kernel(bank: KernelBank, key: SecretKey) -> KernelBank:
    """
    Encrypt every kernel of a bank with the query's key; biases pass through.

    Raises:
        PatchSizeMismatch: bank.P != key.M
        KeyMismatch: kernel element count != key.N
    """
    if bank.P != key.M:
        raise PatchSizeMismatch(f"kernel patch size {bank.P} differs from key block size {key.M}")
    if bank.N != key.N:
        raise KeyMismatch(
            f"{bank.a} x {bank.b} kernels do not fit a {key.dims}-D {key.method} key over {key.N} elements"
        )
    weights = transform_rows(bank.weights_matrix(), key)
    return KernelBank.from_matrix(weights, bank.a, bank.b, bank.biases())


def _check_same_kind(key_a: SecretKey, key_b: SecretKey):
    if key_a.method != key_b.method or (key_a.M, key_a.dims) != (key_b.M, key_b.dims):
        raise KeyMismatch(
            f"keys differ in kind: {key_a.method}/M={key_a.M}/dims={key_a.dims} "
            f"vs {key_b.method}/M={key_b.M}/dims={key_b.dims}"
        )


def verify_cancellation(signal: Signal, bank: KernelBank, key: SecretKey) -> float:
    """
    Compare the plain first layer with the fully encrypted one.

    Returns:
        max over feature-map entries of |A - B| / (1 + |A|), where A is the
        plain forward pass and B the pass with encrypted query and kernels

    Raises:
        ShapeError, PatchSizeMismatch, KeyMismatch: inconsistent shapes
    """
    check_key(signal, key)
    plain = first_layer_forward(signal, bank, key.M)
    encrypted = first_layer_forward(encrypt(signal, key), encrypt_kernel(bank, key), key.M)
    if plain.shape != encrypted.shape:
        raise ShapeError(f"feature maps differ in shape: {plain.shape} vs {encrypted.shape}")
    if plain.size == 0:
        return 0.0
    error = float(np.max(np.abs(plain - encrypted) / (1.0 + np.abs(plain))))
    logger.debug(f"Cancellation error for {key.method} (M={key.M}): {error:.3e}")
    return error


def _relative_l2(candidate: np.ndarray, reference: np.ndarray) -> float:
    diff = float(np.linalg.norm(candidate - reference))
    norm = float(np.linalg.norm(reference))
    if norm == 0.0:
        return 0.0 if diff == 0.0 else float('inf')
    return diff / norm


def measure_mismatch(signal: Signal, bank: KernelBank, key_model: SecretKey,
                   key_query: Optional[SecretKey]) -> float:
    """
    Divergence of the model output when the query key does not match the model key.

    Args:
        signal: plain query
        bank: plain first-layer kernels
        key_model: key the kernels are encrypted with
        key_query: key the query is encrypted with; None feeds the plain query

    Returns:
        relative L2 distance between the mismatched and matched feature maps
    """
    if key_query is not None:
        _check_same_kind(key_model, key_query)
    check_key(signal, key_model)
    model = encrypt_kernel(bank, key_model)
    matched = first_layer_forward(encrypt(signal, key_model), model, key_model.M)
    query = signal if key_query is None else encrypt(signal, key_query)
    mismatched = first_layer_forward(query, model, key_model.M)
    return _relative_l2(mismatched, matched)


def average_mismatch(signal: Signal, bank: KernelBank, key_model: SecretKey,
                     wrong_keys: Sequence[SecretKey]) -> float:
    """Mean :func:`measure_mismatch` over several incorrect query keys."""
    if not wrong_keys:
        raise ShapeError("average_mismatch needs at least one wrong key")
    scores = [measure_mismatch(signal, bank, key_model, key) for key in wrong_keys]
    return float(np.mean(scores))


def random_kernel_bank(C_out: int, dims: int, P: int, seed: int = 0, bias: bool = True) -> KernelBank:
    """Standard-normal kernels (and biases) from the seeded key RNG."""
    if C_out < 1:
        raise ShapeError(f"C_out must be positive, got {C_out}")
    a = 1 if dims == 1 else P
    rng = make_rng(seed)
    weights = rng.normal(C_out * a * P).reshape(C_out, a * P)
    biases = list(rng.normal(C_out)) if bias else None
    return KernelBank.from_matrix(weights, a, P, biases)
