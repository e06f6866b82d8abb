"""
Equalizer Design: FL-MMSE
Quantizes the L-MMSE matrix to the finite alphabet and refits the scales.
"""

import numpy as np

from alphabet import alphabet_values, quantize_to_alphabet_array
from sysmodel import lmmse_equalizer
from utils.errors import DimensionError
from .beta import optimal_beta_columns
from .equalizer import FiniteAlphabetEqualizer


def quantize_complex(z: np.ndarray, K: int) -> np.ndarray:
    """Quantize real and imaginary parts independently."""
    z = np.asarray(z, dtype=complex)
    re = quantize_to_alphabet_array(z.real, K)
    im = quantize_to_alphabet_array(z.imag, K)
    return re + 1j * im


def peak_component(Z: np.ndarray) -> np.ndarray:
    """Per-column max over |Re| and |Im|."""
    Z = np.asarray(Z, dtype=complex)
    return np.maximum(np.abs(Z.real).max(axis=0), np.abs(Z.imag).max(axis=0))


def flmmse_quantize(Wc: np.ndarray, K: int) -> np.ndarray:
    """
    Pre-scale every column so its largest component lands on 2^K - 1, then
    quantize.

    Args:
        Wc: B x U matrix of L-MMSE vectors w_u (one per column)

    Returns:
        B x U matrix of alphabet vectors x_u
    """
    Wc = np.asarray(Wc, dtype=complex)
    if Wc.ndim == 1:
        Wc = Wc[:, None]
    peak = peak_component(Wc)
    if np.any(peak == 0):
        raise DimensionError("L-MMSE matrix has an all-zero row")
    top = alphabet_values(K).top
    return quantize_complex(Wc * (top / peak), K)


def flmmse_design(H: np.ndarray, Es: float, N0: float, K: int) -> FiniteAlphabetEqualizer:
    """
    FL-MMSE equalizer.

    Args:
        H: B x U channel
        Es: Symbol energy
        N0: Noise variance
        K: Alphabet resolution in bits

    Returns:
        FiniteAlphabetEqualizer
    """
    H = np.asarray(H, dtype=complex)
    Wh = lmmse_equalizer(H, N0 / Es)
    Xc = flmmse_quantize(Wh.conj().T, K)
    beta = optimal_beta_columns(Xc, H, Es, N0)
    return FiniteAlphabetEqualizer(Xh=Xc.T.conj(), beta=beta, K=K, method='flmmse')
