"""
System Model: L-MMSE Equalization
Computes W^H = (H^H H + rho I)^-1 H^H through a Cholesky factorization of the
U x U Gram matrix.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from utils.errors import ConfigError, DimensionError, IllConditionedWarning, SingularSystemError

CONDITION_WARN = 1e8
CONDITION_FAIL = 1e15


@dataclass
class LmmseResult:
    """L-MMSE matrix together with the conditioning of its Gram system."""
    Wh: np.ndarray
    condition: float
    ill_conditioned: bool


def condition_number(A: np.ndarray) -> float:
    """2-norm condition number; inf for singular matrices."""
    s = np.linalg.svd(np.asarray(A), compute_uv=False)
    if s[-1] == 0:
        return float('inf')
    return float(s[0] / s[-1])


def lmmse_solve(H: np.ndarray, rho: float) -> LmmseResult:
    """
    Solve for the L-MMSE equalization matrix.

    Args:
        H: B x U channel matrix
        rho: N0/Es regularization

    Returns:
        LmmseResult with the U x B matrix W^H
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] < 1 or H.shape[1] < 1:
        raise DimensionError(f"Channel must be a nonempty matrix, got shape {H.shape}")
    if not np.all(np.isfinite(H)):
        raise DimensionError("Channel has non-finite entries")
    if rho < 0:
        raise ConfigError(f"rho must be nonnegative, got {rho}")

    U = H.shape[1]
    Hh = H.conj().T
    gram = Hh @ H + rho * np.eye(U)
    cond = condition_number(gram)
    if cond > CONDITION_FAIL:
        raise SingularSystemError(
            f"Gram matrix is singular (condition estimate {cond:.3e})", condition=cond
        )
    try:
        factor = linalg.cho_factor(gram, lower=True)
    except linalg.LinAlgError as exc:
        raise SingularSystemError(
            f"Gram matrix is not positive definite (condition estimate {cond:.3e})",
            condition=cond,
        ) from exc

    ill = cond > CONDITION_WARN
    if ill:
        warnings.warn(f"Gram matrix condition number {cond:.3e}", IllConditionedWarning)
    Wh = linalg.cho_solve(factor, Hh)
    return LmmseResult(Wh=Wh, condition=cond, ill_conditioned=ill)


def lmmse_equalizer(H: np.ndarray, rho: float) -> np.ndarray:
    """Return only the U x B L-MMSE matrix; see lmmse_solve."""
    return lmmse_solve(H, rho).Wh


def apply_equalizer(Wh: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Estimate s_hat = W^H y for one vector or a B x N block."""
    Wh = np.asarray(Wh, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if Wh.ndim != 2 or y.shape[0] != Wh.shape[1]:
        raise DimensionError(f"Equalizer {Wh.shape} does not match received vector {y.shape}")
    return Wh @ y
