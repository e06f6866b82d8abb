"""
Equalizer Design: Dispatcher
Single entry point used by the CLI and the BER harness.
"""

from typing import Optional, Union

import numpy as np

from sysmodel import lmmse_equalizer
from utils.errors import ConfigError
from .equalizer import FiniteAlphabetEqualizer
from .fbs import FbsConfig, fame_fbs_design
from .flmmse import flmmse_design
from .oracle import exhaustive_fame_oracle

METHODS = ('lmmse', 'flmmse', 'fame_fbs', 'exhaustive')


def design_equalizer(
    method: str,
    H: np.ndarray,
    Es: float,
    N0: float,
    K: int = 1,
    cfg: Optional[FbsConfig] = None,
) -> Union[np.ndarray, FiniteAlphabetEqualizer]:
    """
    Design an equalizer by name.

    Returns:
        The U x B L-MMSE matrix for 'lmmse', otherwise a FiniteAlphabetEqualizer
    """
    method = method.lower().replace('-', '_')
    if method == 'lmmse':
        return lmmse_equalizer(H, N0 / Es)
    if method == 'flmmse':
        return flmmse_design(H, Es, N0, K)
    if method == 'fame_fbs':
        return fame_fbs_design(H, Es, N0, K, cfg)
    if method == 'exhaustive':
        return exhaustive_fame_oracle(H, Es, N0, K)
    raise ConfigError(f"Unknown design method: {method} (choose from {', '.join(METHODS)})")
