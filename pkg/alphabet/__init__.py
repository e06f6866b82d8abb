"""
Finite Alphabets
Mid-rise alphabets, bipolar bit-plane encoding and two's-complement input
quantization.
"""

from .midrise import (
    MAX_BITS,
    MidRiseAlphabet,
    BitPlanes,
    alphabet_values,
    complex_values,
    quantize_to_alphabet,
    quantize_to_alphabet_array,
    bitplane_encode,
    bitplane_decode,
    bitplane_signs,
)
from .fixed_point import (
    FixedPointVector,
    quantize_input,
    extract_bitplane,
    bitplane_weight,
    fixed_point_reconstruct,
)

__all__ = [
    'MAX_BITS',
    'MidRiseAlphabet',
    'BitPlanes',
    'alphabet_values',
    'complex_values',
    'quantize_to_alphabet',
    'quantize_to_alphabet_array',
    'bitplane_encode',
    'bitplane_decode',
    'bitplane_signs',
    'FixedPointVector',
    'quantize_input',
    'extract_bitplane',
    'bitplane_weight',
    'fixed_point_reconstruct',
]
