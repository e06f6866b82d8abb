"""
Finite Alphabets: Mid-Rise Levels
Odd-integer alphabets {-(2^K-1), ..., -1, +1, ..., 2^K-1} and their bipolar
bit-plane form v = sum_k 2^k c_k with c_k in {-1, +1}.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

import numpy as np

from utils.errors import AlphabetError

MAX_BITS = 8


def _check_bits(K: int) -> None:
    if not isinstance(K, (int, np.integer)) or not 1 <= K <= MAX_BITS:
        raise AlphabetError(f"K must be an integer in [1, {MAX_BITS}], got {K!r}")


@dataclass(frozen=True)
class MidRiseAlphabet:
    """Symmetric, zero-free alphabet with spacing 2."""
    K: int
    values: Tuple[int, ...]

    @property
    def top(self) -> int:
        """Largest level 2^K - 1."""
        return (1 << self.K) - 1

    def contains(self, v) -> bool:
        try:
            return int(v) == v and int(v) in self.values
        except (TypeError, ValueError):
            return False

    def __len__(self) -> int:
        return len(self.values)


@lru_cache(maxsize=None)
def alphabet_values(K: int) -> MidRiseAlphabet:
    """Return the K-bit mid-rise alphabet."""
    _check_bits(K)
    top = (1 << K) - 1
    return MidRiseAlphabet(K=int(K), values=tuple(range(-top, top + 1, 2)))


def complex_values(K: int) -> List[complex]:
    """All a + jb with a, b in the alphabet, ordered lexicographically by (a, b)."""
    values = alphabet_values(K).values
    return [complex(a, b) for a in values for b in values]


def quantize_to_alphabet_array(z: np.ndarray, K: int) -> np.ndarray:
    """
    Nearest alphabet level for every entry of a real array.

    Midpoints (even integers) go to the level above; values outside the range
    clip to +-(2^K - 1).
    """
    _check_bits(K)
    z = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(z)):
        raise AlphabetError("Cannot quantize non-finite values")
    top = (1 << K) - 1
    q = 2.0 * np.floor(z / 2.0) + 1.0
    return np.clip(q, -top, top).astype(np.int64)


def quantize_to_alphabet(z: float, K: int) -> int:
    """Scalar form of quantize_to_alphabet_array."""
    if not math.isfinite(z):
        raise AlphabetError(f"Cannot quantize non-finite value {z}")
    return int(quantize_to_alphabet_array(np.array([z]), K)[0])


@dataclass(frozen=True)
class BitPlanes:
    """Bipolar digits c_0 .. c_{K-1}, least significant first."""
    signs: Tuple[int, ...]

    @property
    def K(self) -> int:
        return len(self.signs)

    def bits(self) -> Tuple[int, ...]:
        """Stored-bit view: 1 for +1, 0 for -1."""
        return tuple(1 if c > 0 else 0 for c in self.signs)


def bitplane_encode(v: int, K: int) -> BitPlanes:
    """
    Decompose an alphabet value into bipolar digits.

    With u = (v + 2^K - 1) / 2, digit c_k = 2*bit_k(u) - 1.
    """
    alphabet = alphabet_values(K)
    if not alphabet.contains(v):
        raise AlphabetError(f"{v!r} is not in the {K}-bit alphabet")
    u = (int(v) + alphabet.top) // 2
    return BitPlanes(signs=tuple(1 if (u >> k) & 1 else -1 for k in range(K)))


def bitplane_decode(planes: BitPlanes) -> int:
    return sum((1 << k) * c for k, c in enumerate(planes.signs))


def bitplane_signs(values: np.ndarray, K: int) -> np.ndarray:
    """
    Vectorized bitplane_encode.

    Returns:
        Array of shape (K,) + values.shape holding +-1 digits
    """
    values = np.asarray(values)
    top = (1 << K) - 1
    if np.any((values % 2) == 0) or np.any(np.abs(values) > top):
        raise AlphabetError(f"Values outside the {K}-bit alphabet")
    u = (values.astype(np.int64) + top) // 2
    planes = np.stack([(u >> k) & 1 for k in range(K)])
    return (2 * planes - 1).astype(np.int64)
