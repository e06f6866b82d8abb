"""
Datapath Emulation: Beta Scaling
Final per-UE multiplication by beta*, either in double precision or with a
fixed-point multiplier.

The fixed-point multiplier stores beta* as a mantissa with `frac_bits`
fractional bits and a shared power-of-two exponent per UE (block floating
point), multiplies exactly with the integer accumulator, and truncates the
product to `out_bits` bits.
"""

import re
from dataclasses import dataclass

import numpy as np

from utils.errors import ConfigError

_FIXED_PATTERN = re.compile(r'^fixed(?:[:(](\d+)\)?)?$')


@dataclass(frozen=True)
class BetaMode:
    """Precision of the beta* multiplier."""
    kind: str = 'float'
    frac_bits: int = 14
    out_bits: int = 24

    def validate(self) -> None:
        if self.kind not in ('float', 'fixed'):
            raise ConfigError(f"beta mode must be float or fixed, got {self.kind}")
        if self.kind == 'fixed' and not (2 <= self.frac_bits <= 30):
            raise ConfigError(f"frac_bits must be in [2, 30], got {self.frac_bits}")
        if self.kind == 'fixed' and not (8 <= self.out_bits <= 48):
            raise ConfigError(f"out_bits must be in [8, 48], got {self.out_bits}")

    @classmethod
    def parse(cls, text: str) -> 'BetaMode':
        """Accepts 'float', 'fixed', 'fixed(14)' or 'fixed:14'."""
        text = text.strip().lower()
        if text == 'float':
            return cls('float')
        match = _FIXED_PATTERN.match(text)
        if not match:
            raise ConfigError(f"Cannot parse beta mode '{text}'")
        mode = cls('fixed', frac_bits=int(match.group(1) or 14))
        mode.validate()
        return mode

    def __str__(self) -> str:
        return 'float' if self.kind == 'float' else f'fixed({self.frac_bits})'


FLOAT = BetaMode('float')


def _truncate(p_re: np.ndarray, p_im: np.ndarray, out_bits: int):
    """Drop low bits so both parts fit in out_bits signed bits."""
    peak = np.maximum(np.abs(p_re), np.abs(p_im)).astype(float)
    bitlen = np.frexp(peak)[1]
    shift = np.maximum(0, bitlen - (out_bits - 1)).astype(np.int64)
    return p_re >> shift, p_im >> shift, shift


def scale_by_beta(acc_re: np.ndarray, acc_im: np.ndarray, beta: np.ndarray,
                  mode: BetaMode = FLOAT) -> np.ndarray:
    """
    Multiply integer accumulator outputs by beta*.

    Args:
        acc_re, acc_im: Integer arrays of shape (U,) or (U, N)
        beta: Length-U complex scales
        mode: Multiplier precision

    Returns:
        Complex estimates with the shape of acc_re
    """
    acc_re = np.asarray(acc_re, dtype=np.int64)
    acc_im = np.asarray(acc_im, dtype=np.int64)
    b = np.asarray(beta, dtype=complex).conj()
    if acc_re.ndim == 2:
        b = b[:, None]

    if mode.kind == 'float':
        return b * (acc_re + 1j * acc_im)

    mode.validate()
    F = mode.frac_bits
    peak_acc = int(max(np.abs(acc_re).max(initial=0), np.abs(acc_im).max(initial=0)))
    if peak_acc.bit_length() + F + 2 > 63:
        raise ConfigError(f"Accumulator values of {peak_acc.bit_length()} bits overflow the fixed({F}) multiplier")
    peak = np.maximum(np.abs(b.real), np.abs(b.imag))
    exponent = np.frexp(peak)[1]
    m_re = np.rint(np.ldexp(b.real, F - exponent)).astype(np.int64)
    m_im = np.rint(np.ldexp(b.imag, F - exponent)).astype(np.int64)

    p_re = acc_re * m_re - acc_im * m_im
    p_im = acc_re * m_im + acc_im * m_re
    p_re, p_im, shift = _truncate(p_re, p_im, mode.out_bits)
    scale = np.ldexp(1.0, shift + exponent - F)
    return (p_re + 1j * p_im) * scale
