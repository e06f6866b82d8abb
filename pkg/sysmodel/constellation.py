"""
System Model: Constellations
Gray-labelled QPSK and 16-QAM with unit mean symbol energy.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict

import numpy as np

from utils.errors import ConfigError, DimensionError


@dataclass(frozen=True)
class Constellation:
    """
    Square QAM constellation.

    points[i] carries label i, written MSB first over bits_per_symbol bits;
    the first half of the bits selects the in-phase level, the second half
    the quadrature level.
    """
    name: str
    points: np.ndarray
    bits_per_symbol: int

    @property
    def Es(self) -> float:
        return float(np.mean(np.abs(self.points) ** 2))

    @property
    def labels(self) -> np.ndarray:
        """Label bits, one row per point."""
        idx = np.arange(len(self.points))
        shifts = np.arange(self.bits_per_symbol - 1, -1, -1)
        return ((idx[:, None] >> shifts[None, :]) & 1).astype(np.uint8)

    def __repr__(self) -> str:
        return f"<Constellation {self.name} ({len(self.points)} points)>"


def _gray_pam(bits: int) -> Dict[int, int]:
    """Map axis label -> odd integer level, Gray code over ascending levels."""
    n = 1 << bits
    levels = np.arange(-(n - 1), n, 2)
    return {i ^ (i >> 1): int(level) for i, level in enumerate(levels)}


@lru_cache(maxsize=None)
def _build(name: str) -> Constellation:
    axis_bits = {'QPSK': 1, '16QAM': 2}[name]
    pam = _gray_pam(axis_bits)
    n_axis = 1 << axis_bits
    points = np.empty(n_axis * n_axis, dtype=complex)
    for i_label in range(n_axis):
        for q_label in range(n_axis):
            points[(i_label << axis_bits) | q_label] = pam[i_label] + 1j * pam[q_label]
    points = points / np.sqrt(np.mean(np.abs(points) ** 2))
    points.setflags(write=False)
    return Constellation(name=name, points=points, bits_per_symbol=2 * axis_bits)


def get_constellation(name: str) -> Constellation:
    """Look up 'QPSK' or '16QAM' (case and dashes ignored)."""
    key = name.upper().replace('-', '').replace('_', '')
    if key not in ('QPSK', '16QAM'):
        raise ConfigError(f"Unknown constellation: {name}")
    return _build(key)


def modulate(bits: np.ndarray, constellation: Constellation) -> np.ndarray:
    """
    Map a flat bit array onto constellation points.

    Args:
        bits: 0/1 array whose length is a multiple of bits_per_symbol
        constellation: Target constellation

    Returns:
        Complex symbol vector
    """
    bits = np.asarray(bits, dtype=np.int64).ravel()
    q = constellation.bits_per_symbol
    if bits.size % q != 0:
        raise DimensionError(f"Bit count {bits.size} is not a multiple of {q}")
    if np.any((bits != 0) & (bits != 1)):
        raise DimensionError("Bits must be 0 or 1")
    weights = 1 << np.arange(q - 1, -1, -1)
    indices = bits.reshape(-1, q) @ weights
    return constellation.points[indices]


def detect_indices(shat: np.ndarray, constellation: Constellation) -> np.ndarray:
    """Nearest-point indices; ties go to the smallest label."""
    shat = np.asarray(shat, dtype=complex)
    dist = np.abs(shat.ravel()[:, None] - constellation.points[None, :]) ** 2
    return np.argmin(dist, axis=1).reshape(shat.shape)


def detect(shat: np.ndarray, constellation: Constellation) -> np.ndarray:
    """Hard-detect symbols and return the flat label bits."""
    indices = detect_indices(shat, constellation).ravel()
    return constellation.labels[indices].ravel()
