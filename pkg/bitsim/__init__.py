"""
Datapath Emulation
Bit-exact models of the PPAC processing-in-memory array and of the original
and optimized MAC arrays, with cycle counting.
"""

from .cycles import (
    ACCUMULATOR_LIMIT,
    CycleReport,
    accumulator_bound,
    check_accumulator,
    ppac_cycles,
    mac_cycles,
    is_power_of_two,
    log2_exact,
)
from .beta_scaling import BetaMode, FLOAT, scale_by_beta
from .reference import real_decomposition, integer_mvp_oracle
from .ppac import (
    PpacRow,
    PpacArray,
    ppac_load,
    ppac_row_op,
    ppac_mvp,
    ppac_mvp_batch,
    ppac_equalize,
)
from .mac_array import MacArrayConfig, mac_mvp

__all__ = [
    'ACCUMULATOR_LIMIT',
    'CycleReport',
    'accumulator_bound',
    'check_accumulator',
    'ppac_cycles',
    'mac_cycles',
    'is_power_of_two',
    'log2_exact',
    'BetaMode',
    'FLOAT',
    'scale_by_beta',
    'real_decomposition',
    'integer_mvp_oracle',
    'PpacRow',
    'PpacArray',
    'ppac_load',
    'ppac_row_op',
    'ppac_mvp',
    'ppac_mvp_batch',
    'ppac_equalize',
    'MacArrayConfig',
    'mac_mvp',
]
