"""
Datapath Emulation: Integer Reference
Arbitrary-precision real-decomposed product X^T_R y_R using Python integers.
"""

from typing import List, Sequence

import numpy as np


def real_decomposition(Xh: np.ndarray) -> np.ndarray:
    """Integer block matrix [[Re, -Im], [Im, Re]] of X^H."""
    re = np.rint(np.asarray(Xh).real).astype(np.int64)
    im = np.rint(np.asarray(Xh).imag).astype(np.int64)
    return np.block([[re, -im], [im, re]])


def integer_mvp_oracle(Xh: np.ndarray, y_re: Sequence[int], y_im: Sequence[int]) -> List[int]:
    """
    Exact product computed with Python ints.

    Returns:
        2U integers: real parts of X^H y followed by imaginary parts
    """
    XR = real_decomposition(Xh)
    y = [int(v) for v in y_re] + [int(v) for v in y_im]
    return [sum(int(a) * b for a, b in zip(row, y)) for row in XR.tolist()]
