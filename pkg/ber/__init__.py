"""
BER Harness
Monte-Carlo uncoded BER sweeps over i.i.d. Rayleigh channels through the
float and bit-exact datapaths.
"""

from .config import DATAPATHS, SweepConfig
from .sweep import (
    CURVE_COLUMNS,
    TRIALS_PER_ROUND,
    BerPoint,
    BerCurve,
    BerSimulator,
    ber_sweep,
    equalize_block,
    find_operating_point,
    input_scale,
    run_trial,
    trial_seed,
    write_curve_csv,
)
from .consistency import ConsistencyPoint, ConsistencyReport, datapath_consistency, relative_deviation

__all__ = [
    'DATAPATHS',
    'SweepConfig',
    'CURVE_COLUMNS',
    'TRIALS_PER_ROUND',
    'BerPoint',
    'BerCurve',
    'BerSimulator',
    'ber_sweep',
    'equalize_block',
    'find_operating_point',
    'input_scale',
    'run_trial',
    'trial_seed',
    'write_curve_csv',
    'ConsistencyPoint',
    'ConsistencyReport',
    'datapath_consistency',
    'relative_deviation',
]
