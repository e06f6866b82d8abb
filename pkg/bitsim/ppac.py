"""
Datapath Emulation: PPAC
Bit-exact model of the bit-serial processing-in-memory array.

Storage: the real decomposition X^T_R = [[Re X^H, -Im X^H], [Im X^H, Re X^H]]
is split into K bipolar bit-planes; row (r, k) holds plane k of output row r
as stored bits (1 for +1, 0 for -1). Each cycle feeds one two's-complement
bit-plane of y_R, every row ALU forms popcount(XNOR) - zero_count, rows of one
output are combined with weights 2^k and the result is accumulated
MSB first as acc <- 2 acc + q (the sign plane enters negated).
"""

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from alphabet import FixedPointVector, bitplane_signs
from fame import FiniteAlphabetEqualizer
from utils.errors import AlphabetError, DimensionError
from .beta_scaling import FLOAT, BetaMode, scale_by_beta
from .cycles import check_accumulator
from .reference import real_decomposition


@dataclass(frozen=True)
class PpacRow:
    """One memory row and its precomputed zero count."""
    bits: np.ndarray
    zero_count: int

    @classmethod
    def from_signs(cls, signs) -> 'PpacRow':
        bits = (np.asarray(signs) > 0).astype(np.uint8)
        return cls(bits=bits, zero_count=int(bits.size - bits.sum()))


@dataclass(frozen=True)
class PpacArray:
    """Loaded array of 2KU rows with 2B bits each."""
    K: int
    U: int
    B: int
    bits: np.ndarray
    zero_count: np.ndarray

    @property
    def n_rows(self) -> int:
        return 2 * self.K * self.U

    @property
    def n_cols(self) -> int:
        return 2 * self.B

    def row_index(self, r: int, k: int) -> int:
        return r * self.K + k

    def row(self, r: int, k: int) -> PpacRow:
        i = self.row_index(r, k)
        return PpacRow(bits=self.bits[i], zero_count=int(self.zero_count[i]))

    def stored_matrix(self) -> np.ndarray:
        """Decode the stored planes back into the integer matrix X^T_R."""
        signs = 2 * self.bits.astype(np.int64) - 1
        planes = signs.reshape(2 * self.U, self.K, self.n_cols)
        weights = (1 << np.arange(self.K))[None, :, None]
        return np.sum(weights * planes, axis=1)

    def __repr__(self) -> str:
        return f"<PpacArray {self.n_rows}x{self.n_cols} K={self.K} U={self.U} B={self.B}>"


def ppac_load(fae: FiniteAlphabetEqualizer) -> PpacArray:
    """Write X^T_R of an equalizer into bit-plane rows."""
    XR = real_decomposition(fae.Xh)
    signs = bitplane_signs(XR, fae.K)                  # K x 2U x 2B
    rows = signs.transpose(1, 0, 2).reshape(-1, XR.shape[1])
    bits = (rows > 0).astype(np.uint8)
    zero_count = (bits.shape[1] - bits.sum(axis=1)).astype(np.int64)
    bits.setflags(write=False)
    zero_count.setflags(write=False)
    return PpacArray(K=fae.K, U=fae.U, B=fae.B, bits=bits, zero_count=zero_count)


def ppac_row_op(row: PpacRow, input_bits) -> int:
    """
    Row ALU: popcount(XNOR(stored, input)) - zero_count.

    Equals the inner product of the bipolar stored row with the 0/1 inputs.
    """
    input_bits = np.asarray(input_bits, dtype=np.uint8)
    if input_bits.shape != row.bits.shape:
        raise DimensionError(f"Input of length {input_bits.size} for a row of {row.bits.size} bits")
    popcount = int(np.count_nonzero(row.bits == input_bits))
    return popcount - row.zero_count


def _input_words(y_re, y_im, B: int, L: int) -> np.ndarray:
    """Stack [Re; Im] integer inputs and check they fit in L bits."""
    parts = []
    for part in (y_re, y_im):
        entries = part.entries if isinstance(part, FixedPointVector) else np.asarray(part, dtype=np.int64)
        parts.append(entries)
    if parts[0].shape != parts[1].shape or parts[0].shape[0] != B:
        raise DimensionError(f"Input vectors of shape {parts[0].shape}/{parts[1].shape}, expected B={B}")
    y = np.concatenate(parts, axis=0)
    lo, hi = -(1 << (L - 1)), (1 << (L - 1)) - 1
    if y.size and (y.min() < lo or y.max() > hi):
        raise AlphabetError(f"Input entries do not fit in {L} bits")
    return y


def _cycle(arr: PpacArray, plane: np.ndarray) -> np.ndarray:
    """All row ALUs for one input plane (shape 2B or 2B x N), combined per output."""
    stored = arr.bits.astype(np.int64)
    popcount = stored @ plane + (1 - stored) @ (1 - plane)
    zc = arr.zero_count[:, None] if plane.ndim == 2 else arr.zero_count
    q_rows = popcount - zc
    weights = 1 << np.arange(arr.K)
    shaped = q_rows.reshape((2 * arr.U, arr.K) + q_rows.shape[1:])
    return np.tensordot(weights, shaped, axes=([0], [1]))


def _bit_serial(arr: PpacArray, y: np.ndarray, L: int, trace: Optional[List] = None) -> np.ndarray:
    check_accumulator(arr.K, arr.B, L)
    mask = (1 << L) - 1
    words = y & mask
    acc = None
    for ell in range(L - 1, -1, -1):
        plane = (words >> ell) & 1
        q = _cycle(arr, plane)
        acc = -q if ell == L - 1 else 2 * acc + q
        if trace is not None:
            trace.append(acc.copy())
    return acc


def ppac_mvp(arr: PpacArray, y_re, y_im, L: int, trace: Optional[List] = None) -> np.ndarray:
    """
    Bit-serial product X^T_R y_R in L cycles.

    Args:
        arr: Loaded PpacArray
        y_re, y_im: FixedPointVector or integer arrays of length B
        L: Input word length (cycles)
        trace: Optional list receiving the accumulator after every cycle

    Returns:
        Length-2U integer vector (real parts, then imaginary parts)
    """
    y = _input_words(y_re, y_im, arr.B, L)
    if y.ndim != 1:
        raise DimensionError("ppac_mvp takes single vectors; use ppac_mvp_batch")
    return _bit_serial(arr, y, L, trace)


def ppac_mvp_batch(arr: PpacArray, Y_re, Y_im, L: int) -> np.ndarray:
    """Same as ppac_mvp for B x N blocks; returns 2U x N."""
    Y = _input_words(Y_re, Y_im, arr.B, L)
    if Y.ndim == 1:
        Y = Y[:, None]
    return _bit_serial(arr, Y, L)


def ppac_equalize(arr: PpacArray, beta, y_re, y_im, L: int,
                  beta_mode: BetaMode = FLOAT) -> np.ndarray:
    """
    Full PPAC equalization: bit-serial X^H y followed by the beta* multiplier.

    Accepts single vectors (length B) or B x N blocks.
    """
    words = _input_words(y_re, y_im, arr.B, L)
    out = _bit_serial(arr, words, L)
    return scale_by_beta(out[:arr.U], out[arr.U:], beta, beta_mode)
