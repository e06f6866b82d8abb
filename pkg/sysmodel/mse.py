"""
System Model: Mean-Squared Error
Closed-form and Monte-Carlo MSE of a linear equalizer V^H.
"""

from typing import Tuple, Union

import numpy as np

from utils.errors import ConfigError, DimensionError
from .channel import simulate_uplink
from .constellation import Constellation


def _check_dims(Vh: np.ndarray, H: np.ndarray) -> None:
    if Vh.ndim != 2 or H.ndim != 2:
        raise DimensionError("Vh and H must be matrices")
    if Vh.shape[1] != H.shape[0] or Vh.shape[0] != H.shape[1]:
        raise DimensionError(f"Vh {Vh.shape} does not match H {H.shape}")


def mse_per_ue(Vh: np.ndarray, H: np.ndarray, Es: float, N0: float) -> np.ndarray:
    """
    Per-user MSE terms Es*||H^H v_u - e_u||^2 + N0*||v_u||^2.

    Row u of V^H is v_u^H, so row u of V^H H - I equals (H^H v_u - e_u)^H.
    """
    Vh = np.asarray(Vh, dtype=complex)
    H = np.asarray(H, dtype=complex)
    _check_dims(Vh, H)
    if not Es > 0 or N0 < 0:
        raise ConfigError(f"Need Es > 0 and N0 >= 0, got Es={Es}, N0={N0}")
    E = Vh @ H - np.eye(H.shape[1])
    bias = np.sum(np.abs(E) ** 2, axis=1)
    noise = np.sum(np.abs(Vh) ** 2, axis=1)
    return Es * bias + N0 * noise


def mse_closed_form(Vh: np.ndarray, H: np.ndarray, Es: float, N0: float) -> float:
    return float(np.sum(mse_per_ue(Vh, H, Es, N0)))


def mse_monte_carlo(
    Vh: np.ndarray,
    H: np.ndarray,
    Es: float,
    N0: float,
    constellation: Constellation,
    trials: int,
    seed=None,
    return_stderr: bool = False,
) -> Union[float, Tuple[float, float]]:
    """
    Empirical average of ||V^H y - s||^2.

    Symbols are drawn uniformly from the constellation and scaled to energy Es.

    Args:
        trials: Number of transmitted vectors
        return_stderr: Also return the standard error of the mean

    Returns:
        MSE estimate, or (estimate, standard error)
    """
    Vh = np.asarray(Vh, dtype=complex)
    H = np.asarray(H, dtype=complex)
    _check_dims(Vh, H)
    if trials < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}")

    rng = np.random.default_rng(seed)
    U = H.shape[1]
    idx = rng.integers(0, len(constellation.points), size=(U, trials))
    s = np.sqrt(Es) * constellation.points[idx]
    y = simulate_uplink(H, s, N0, seed=rng)
    err = np.sum(np.abs(Vh @ y - s) ** 2, axis=0)

    mean = float(np.mean(err))
    if not return_stderr:
        return mean
    stderr = float(np.std(err, ddof=1) / np.sqrt(trials)) if trials > 1 else float('inf')
    return mean, stderr
