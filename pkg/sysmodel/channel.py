"""
System Model: Channel
i.i.d. Rayleigh channels and the narrowband uplink input-output relation.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from utils.errors import ConfigError, DimensionError


@dataclass(frozen=True)
class UplinkScenario:
    """B-antenna basestation receiving U single-antenna users."""
    B: int
    U: int
    Es: float = 1.0
    N0: float = 0.0

    def __post_init__(self):
        if self.U < 1 or self.B < self.U:
            raise ConfigError(f"Need B >= U >= 1, got B={self.B}, U={self.U}")
        if not self.Es > 0:
            raise ConfigError(f"Es must be positive, got {self.Es}")
        if self.N0 < 0:
            raise ConfigError(f"N0 must be nonnegative, got {self.N0}")

    @property
    def rho(self) -> float:
        """Regularization N0/Es of the L-MMSE equalizer."""
        return self.N0 / self.Es

    @classmethod
    def from_snr_db(cls, B: int, U: int, snr_db: float, Es: float = 1.0) -> 'UplinkScenario':
        return cls(B=B, U=U, Es=Es, N0=snr_db_to_n0(snr_db, Es))


def snr_db_to_n0(snr_db: float, Es: float = 1.0) -> float:
    """SNR is Es/N0 in dB."""
    return Es * 10.0 ** (-snr_db / 10.0)


def n0_to_snr_db(N0: float, Es: float = 1.0) -> float:
    if N0 <= 0:
        return float('inf')
    return 10.0 * np.log10(Es / N0)


def _complex_normal(rng: np.random.Generator, shape, variance: float = 1.0) -> np.ndarray:
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def generate_rayleigh_channel(B: int, U: int, seed=None) -> np.ndarray:
    """
    Draw a B x U channel with i.i.d. CN(0, 1) entries.

    Args:
        B: Number of basestation antennas
        U: Number of users
        seed: Seed or numpy Generator

    Returns:
        Complex B x U matrix
    """
    if U < 1 or B < U:
        raise DimensionError(f"Need B >= U >= 1, got B={B}, U={U}")
    rng = np.random.default_rng(seed)
    return _complex_normal(rng, (B, U))


def simulate_uplink(H: np.ndarray, s: np.ndarray, N0: float, seed=None) -> np.ndarray:
    """
    Compute y = Hs + n with n ~ CN(0, N0 I).

    `s` may be a length-U vector or a U x N block of N transmit vectors.
    """
    H = np.asarray(H, dtype=complex)
    s = np.asarray(s, dtype=complex)
    if H.ndim != 2 or s.shape[0] != H.shape[1]:
        raise DimensionError(f"Channel {H.shape} does not match symbols {s.shape}")
    if N0 < 0:
        raise ConfigError(f"N0 must be nonnegative, got {N0}")
    y = H @ s
    if N0 > 0:
        rng = np.random.default_rng(seed)
        y = y + _complex_normal(rng, y.shape, N0)
    return y
