"""
System Model
Complex-baseband uplink model: channels, constellations, L-MMSE equalization
and MSE evaluation.
"""

from .channel import (
    UplinkScenario,
    generate_rayleigh_channel,
    simulate_uplink,
    snr_db_to_n0,
    n0_to_snr_db,
)
from .constellation import Constellation, get_constellation, modulate, detect
from .lmmse import LmmseResult, lmmse_equalizer, lmmse_solve, apply_equalizer, condition_number
from .mse import mse_closed_form, mse_per_ue, mse_monte_carlo

__all__ = [
    'UplinkScenario',
    'generate_rayleigh_channel',
    'simulate_uplink',
    'snr_db_to_n0',
    'n0_to_snr_db',
    'Constellation',
    'get_constellation',
    'modulate',
    'detect',
    'LmmseResult',
    'lmmse_equalizer',
    'lmmse_solve',
    'apply_equalizer',
    'condition_number',
    'mse_closed_form',
    'mse_per_ue',
    'mse_monte_carlo',
]
