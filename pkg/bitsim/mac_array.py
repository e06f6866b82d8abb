"""
Datapath Emulation: MAC Arrays
Per-UE processing element with M multiply-accumulate units working on B/M
contiguous entries each, followed by a binary adder tree over adjacent
partial sums. M = 1 is the original linear array.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from fame import FiniteAlphabetEqualizer
from utils.errors import ConfigError, DimensionError
from .beta_scaling import FLOAT, BetaMode, scale_by_beta
from .cycles import CycleReport, check_accumulator, is_power_of_two, mac_cycles
from .ppac import _input_words


@dataclass(frozen=True)
class MacArrayConfig:
    """M MAC units per processing element."""
    M: int
    B: int
    U: int

    def validate(self) -> None:
        if not is_power_of_two(self.M):
            raise ConfigError(f"M must be a power of two, got {self.M}")
        if self.M > self.B or self.B % self.M != 0:
            raise ConfigError(f"M={self.M} must divide B={self.B}")
        if self.U < 1:
            raise ConfigError(f"U must be >= 1, got {self.U}")


def _tree_reduce(partials: np.ndarray) -> np.ndarray:
    """Sum adjacent pairs level by level along axis 1."""
    while partials.shape[1] > 1:
        partials = partials[:, 0::2] + partials[:, 1::2]
    return partials[:, 0]


def mac_mvp(fae: FiniteAlphabetEqualizer, y_re, y_im, L: int, cfg: MacArrayConfig,
            beta_mode: BetaMode = FLOAT) -> Tuple[np.ndarray, CycleReport]:
    """
    Emulate the (optimized) MAC array.

    Args:
        fae: Equalizer whose X^H is stored in the PE memories
        y_re, y_im: Quantized inputs (length B, or B x N)
        L: Input word length
        cfg: MAC array configuration

    Returns:
        (beta-scaled estimates, CycleReport)
    """
    cfg.validate()
    if cfg.B != fae.B or cfg.U != fae.U:
        raise DimensionError(f"Config B={cfg.B}, U={cfg.U} does not match equalizer {fae.U}x{fae.B}")
    check_accumulator(fae.K, fae.B, L)
    y = _input_words(y_re, y_im, fae.B, L)
    single = y.ndim == 1
    if single:
        y = y[:, None]
    yr, yi = y[:fae.B], y[fae.B:]
    N = y.shape[1]

    xr = np.rint(fae.Xh.real).astype(np.int64)
    xi = np.rint(fae.Xh.imag).astype(np.int64)
    width = fae.B // cfg.M
    # (U, M, width) x (M, width, N) -> (U, M, N) partial sums per MAC unit
    xr_p = xr.reshape(fae.U, cfg.M, width)
    xi_p = xi.reshape(fae.U, cfg.M, width)
    yr_p = yr.reshape(cfg.M, width, N)
    yi_p = yi.reshape(cfg.M, width, N)
    part_re = np.einsum('umw,mwn->umn', xr_p, yr_p) - np.einsum('umw,mwn->umn', xi_p, yi_p)
    part_im = np.einsum('umw,mwn->umn', xr_p, yi_p) + np.einsum('umw,mwn->umn', xi_p, yr_p)

    acc_re = _tree_reduce(part_re)
    acc_im = _tree_reduce(part_im)
    shat = scale_by_beta(acc_re, acc_im, fae.beta, beta_mode)
    if single:
        shat = shat[:, 0]
    return shat, mac_cycles(fae.B, cfg.M)
