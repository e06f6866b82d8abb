"""
JSON interchange helpers.

Complex numbers are written as [re, im] pairs, matrices as row-major lists
of rows. Output is sorted and indented so identical inputs give identical
bytes.
"""

import json
import numbers
from pathlib import Path
from typing import Any, List, Union

import numpy as np

from .errors import DimensionError


def complex_to_pair(z: complex) -> List[float]:
    """Encode one complex number as [re, im]."""
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _real(value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise DimensionError(f"Expected a number, got {value!r}")
    x = float(value)
    if not np.isfinite(x):
        raise DimensionError(f"Expected a finite number, got {value!r}")
    return x


def pair_to_complex(pair: Any) -> complex:
    """Decode [re, im] (or a bare real number) into a finite complex number."""
    if isinstance(pair, numbers.Real) and not isinstance(pair, bool):
        return complex(_real(pair))
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise DimensionError(f"Expected [re, im] pair, got {pair!r}")
    return complex(_real(pair[0]), _real(pair[1]))


def encode_vector(v: np.ndarray) -> List[List[float]]:
    return [complex_to_pair(z) for z in np.asarray(v).ravel()]


def decode_vector(data: List[Any]) -> np.ndarray:
    if not isinstance(data, list):
        raise DimensionError(f"Expected a list of [re, im] pairs, got {type(data).__name__}")
    return np.array([pair_to_complex(p) for p in data], dtype=complex)


def encode_matrix(A: np.ndarray) -> List[List[List[float]]]:
    A = np.asarray(A)
    if A.ndim != 2:
        raise DimensionError(f"Expected a 2-D matrix, got shape {A.shape}")
    return [[complex_to_pair(z) for z in row] for row in A]


def decode_matrix(data: List[List[Any]]) -> np.ndarray:
    if not isinstance(data, list) or not all(isinstance(row, list) for row in data):
        raise DimensionError("Matrix must be a list of rows")
    if not data:
        raise DimensionError("Matrix has no rows")
    widths = {len(row) for row in data}
    if len(widths) != 1:
        raise DimensionError("Matrix rows have different lengths")
    return np.array([[pair_to_complex(p) for p in row] for row in data], dtype=complex)


def dumps(obj: Any) -> str:
    """Serialize to stable, pretty-printed JSON."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def save_json(obj: Any, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(dumps(obj))
    return path


def load_json(path: Union[str, Path]) -> Any:
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)
