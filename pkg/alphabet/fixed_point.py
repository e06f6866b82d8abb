"""
Finite Alphabets: Fixed-Point Input
L-bit two's-complement quantization of the received vector and bit-plane
extraction for bit-serial processing.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from utils.errors import AlphabetError, ConfigError


@dataclass(frozen=True)
class FixedPointVector:
    """Integer vector whose entries fit in L-bit two's complement."""
    L: int
    entries: np.ndarray

    def __post_init__(self):
        if self.L < 2:
            raise ConfigError(f"Word length must be >= 2, got {self.L}")
        entries = np.asarray(self.entries, dtype=np.int64)
        lo, hi = -(1 << (self.L - 1)), (1 << (self.L - 1)) - 1
        if entries.size and (entries.min() < lo or entries.max() > hi):
            raise AlphabetError(f"Entries outside [{lo}, {hi}] for L={self.L}")
        object.__setattr__(self, 'entries', entries)

    def __len__(self) -> int:
        return self.entries.shape[0]


def _round_half_away(x: np.ndarray) -> np.ndarray:
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def quantize_input(
    y: np.ndarray, L: int, scale: float
) -> Tuple[FixedPointVector, FixedPointVector]:
    """
    Quantize real and imaginary parts to L-bit integers.

    Each part maps to round(x / scale) (half away from zero), saturated to
    [-2^(L-1), 2^(L-1) - 1]. Works on vectors and on B x N blocks.
    """
    if not scale > 0:
        raise ConfigError(f"scale must be positive, got {scale}")
    if L < 2:
        raise ConfigError(f"Word length must be >= 2, got {L}")
    y = np.asarray(y, dtype=complex)
    lo, hi = -(1 << (L - 1)), (1 << (L - 1)) - 1

    def convert(part: np.ndarray) -> FixedPointVector:
        q = np.clip(_round_half_away(part / scale), lo, hi)
        return FixedPointVector(L=L, entries=q.astype(np.int64))

    return convert(y.real), convert(y.imag)


def extract_bitplane(v: FixedPointVector, bit: int) -> np.ndarray:
    """Bit `bit` of every entry's L-bit encoding; bit L-1 is the sign bit."""
    if not 0 <= bit < v.L:
        raise AlphabetError(f"Bit index {bit} out of range for L={v.L}")
    mask = (1 << v.L) - 1
    return ((v.entries & mask) >> bit) & 1


def bitplane_weight(bit: int, L: int) -> int:
    """Two's-complement weight: -2^(L-1) for the sign bit, 2^bit otherwise."""
    return -(1 << (L - 1)) if bit == L - 1 else 1 << bit


def fixed_point_reconstruct(planes: np.ndarray, L: int) -> np.ndarray:
    """
    Rebuild integers from stacked bit-planes.

    Args:
        planes: Array of shape (L, ...) with plane ell at index ell
        L: Word length
    """
    planes = np.asarray(planes, dtype=np.int64)
    if planes.shape[0] != L:
        raise AlphabetError(f"Expected {L} planes, got {planes.shape[0]}")
    return sum(bitplane_weight(ell, L) * planes[ell] for ell in range(L))
