"""
Equalizer Design: Exhaustive Oracle
Global per-UE minimizer of the finite-alphabet MSE by enumerating every
x in alphabet^B. Only meant for tiny instances.
"""

import numpy as np

from alphabet import complex_values
from utils.errors import InstanceTooLargeError
from .beta import optimal_beta_columns
from .equalizer import FiniteAlphabetEqualizer

MAX_CANDIDATES = 1 << 24
CHUNK = 1 << 15


def exhaustive_fame_oracle(H: np.ndarray, Es: float, N0: float, K: int) -> FiniteAlphabetEqualizer:
    """
    Exhaustive finite-alphabet MSE minimizer.

    Candidates are visited in lexicographic order of (Re x_1, Im x_1, Re x_2, ...),
    so the first minimizer found wins ties.

    Raises:
        InstanceTooLargeError: if (2^K)^(2B) exceeds 2^24
    """
    H = np.asarray(H, dtype=complex)
    B, U = H.shape
    levels = np.array(complex_values(K))
    base = len(levels)
    total = base ** B
    if total > MAX_CANDIDATES:
        raise InstanceTooLargeError(
            f"{total} candidates per UE exceeds the limit of {MAX_CANDIDATES}"
        )

    Hc = H.conj()
    eye = np.eye(U)
    weights = base ** np.arange(B - 1, -1, -1, dtype=np.int64)
    best_f = np.full(U, np.inf)
    best_X = np.zeros((B, U), dtype=complex)

    for start in range(0, total, CHUNK):
        n = np.arange(start, min(start + CHUNK, total), dtype=np.int64)
        digits = (n[:, None] // weights[None, :]) % base
        X = levels[digits]                       # candidates x (rows), N x B
        A = X @ Hc                               # rows (H^H x)^T, N x U
        energy = np.sum(np.abs(X) ** 2, axis=1)
        gain = np.sum(np.abs(A) ** 2, axis=1)
        for u in range(U):
            beta = Es * (X.conj() @ H[:, u]) / (Es * gain + N0 * energy)
            err = beta[:, None] * A - eye[u][None, :]
            f = Es * np.sum(np.abs(err) ** 2, axis=1) + N0 * np.abs(beta) ** 2 * energy
            idx = int(np.argmin(f))
            if f[idx] < best_f[u]:
                best_f[u] = f[idx]
                best_X[:, u] = X[idx]

    beta = optimal_beta_columns(best_X, H, Es, N0)
    return FiniteAlphabetEqualizer(Xh=best_X.T.conj(), beta=beta, K=K, method='exhaustive')
