"""
Equalizer Design: Per-UE Scale
Closed-form beta_u minimizing Es*||H^H (beta x_u) - e_u||^2 + N0*||beta x_u||^2.
"""

import numpy as np

from utils.errors import DimensionError


def optimal_beta_columns(Xc: np.ndarray, H: np.ndarray, Es: float, N0: float) -> np.ndarray:
    """
    Optimal scales for all UEs at once.

    Args:
        Xc: B x U matrix whose column u is x_u
        H: B x U channel

    Returns:
        Length-U complex vector beta
    """
    Xc = np.asarray(Xc, dtype=complex)
    H = np.asarray(H, dtype=complex)
    if Xc.shape != H.shape:
        raise DimensionError(f"X columns {Xc.shape} do not match H {H.shape}")
    energy = np.sum(np.abs(Xc) ** 2, axis=0)
    if np.any(energy == 0):
        raise DimensionError("x_u must be nonzero")
    A = H.conj().T @ Xc
    numerator = Es * np.sum(Xc.conj() * H, axis=0)
    denominator = Es * np.sum(np.abs(A) ** 2, axis=0) + N0 * energy
    return numerator / denominator


def optimal_beta(x_u: np.ndarray, H: np.ndarray, Es: float, N0: float, u: int) -> complex:
    """beta_u = Es (x_u^H h_u) / (Es ||H^H x_u||^2 + N0 ||x_u||^2)."""
    x_u = np.asarray(x_u, dtype=complex).ravel()
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or x_u.shape[0] != H.shape[0]:
        raise DimensionError(f"x_u of length {x_u.shape[0]} does not match H {H.shape}")
    if not 0 <= u < H.shape[1]:
        raise DimensionError(f"UE index {u} out of range")
    if not np.any(x_u):
        raise DimensionError("x_u must be nonzero")
    a = H.conj().T @ x_u
    numerator = Es * np.vdot(x_u, H[:, u])
    denominator = Es * np.vdot(a, a).real + N0 * np.vdot(x_u, x_u).real
    return complex(numerator / denominator)
