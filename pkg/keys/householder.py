"""
Householder QR decomposition for square matrices.
"""
from typing import Tuple

import numpy as np


def householder_qr(A: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Full QR decomposition A = Q R by Householder reflections.

    First loop: build each reflector and apply it to R.
    Second loop: accumulate Q backwards, H0 H1 ... Hk I.

    Args:
        A: square matrix

    Returns:
        Tuple of (Q, R), Q orthogonal and R upper triangular
    """
    A = np.array(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"householder_qr expects a square matrix, got shape {A.shape}")
    n = A.shape[0]
    R = A.copy()
    reflectors = []

    for i in range(n - 1):
        x = R[i:, i]
        norm_x = np.linalg.norm(x)
        if norm_x == 0.0:
            reflectors.append(None)
            continue
        s = 1.0 if x[0] >= 0 else -1.0
        v = x.copy()
        v[0] += s * norm_x
        v /= np.linalg.norm(v)
        reflectors.append(v)
        R[i:, i:] -= 2.0 * v[:, np.newaxis] * (v @ R[i:, i:])

    Q = np.eye(n)
    for j in range(len(reflectors) - 1, -1, -1):
        v = reflectors[j]
        if v is None:
            continue
        Q[j:, :] -= 2.0 * v[:, np.newaxis] * (v @ Q[j:, :])

    return Q, np.triu(R)


def normalize_signs(Q: np.ndarray, R: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Flip column i of Q and row i of R wherever R[i, i] < 0.

    The product Q R is unchanged; the result is the unique QR factorization
    with a non-negative diagonal.
    """
    signs = np.where(np.diag(R) < 0, -1.0, 1.0)
    return Q * signs[np.newaxis, :], R * signs[:, np.newaxis]
