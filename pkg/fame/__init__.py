"""
Equalizer Design
FL-MMSE quantization, FAME-FBS forward-backward splitting and an exhaustive
oracle for finite-alphabet equalizers.
"""

from .equalizer import FiniteAlphabetEqualizer
from .beta import optimal_beta, optimal_beta_columns
from .flmmse import flmmse_design, flmmse_quantize, quantize_complex
from .fbs import (
    FbsConfig,
    FbsTrace,
    fbs_gradient,
    project_scaled_alphabet,
    fame_fbs_design,
    local_search_columns,
    max_eigenvalue,
)
from .oracle import exhaustive_fame_oracle
from .design import METHODS, design_equalizer

__all__ = [
    'FiniteAlphabetEqualizer',
    'optimal_beta',
    'optimal_beta_columns',
    'flmmse_design',
    'flmmse_quantize',
    'quantize_complex',
    'FbsConfig',
    'FbsTrace',
    'fbs_gradient',
    'project_scaled_alphabet',
    'fame_fbs_design',
    'local_search_columns',
    'max_eigenvalue',
    'exhaustive_fame_oracle',
    'METHODS',
    'design_equalizer',
]
