"""
Equalizer Design: Finite-Alphabet Equalizer
V^H = diag(beta*) X^H with a low-resolution X^H and one complex scale per UE.
"""

from dataclasses import dataclass, field
from typing import Any, Dict

import numpy as np

from alphabet import alphabet_values
from sysmodel import mse_closed_form, mse_per_ue
from utils import jsonio
from utils.errors import AlphabetError, DimensionError


@dataclass
class FiniteAlphabetEqualizer:
    """
    Finite-alphabet equalizer.

    Xh holds x_u^H in row u; the design algorithms work on the column vectors
    x_u, so X = conj(Xh) is exposed as well.
    """
    Xh: np.ndarray
    beta: np.ndarray
    K: int
    method: str = ""
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.Xh = np.asarray(self.Xh, dtype=complex)
        self.beta = np.asarray(self.beta, dtype=complex).ravel()
        if self.Xh.ndim != 2 or self.beta.shape[0] != self.Xh.shape[0]:
            raise DimensionError(f"Xh {self.Xh.shape} and beta {self.beta.shape} disagree")
        if not np.all(np.isfinite(self.beta)):
            raise DimensionError("beta must be finite")
        top = alphabet_values(self.K).top
        for part in (self.Xh.real, self.Xh.imag):
            if np.any(part != np.round(part)) or np.any(part % 2 == 0) or np.any(np.abs(part) > top):
                raise AlphabetError(f"Xh entries outside the {self.K}-bit alphabet")

    @property
    def U(self) -> int:
        return self.Xh.shape[0]

    @property
    def B(self) -> int:
        return self.Xh.shape[1]

    @property
    def X(self) -> np.ndarray:
        """Rows x_u^T (conjugate of Xh)."""
        return self.Xh.conj()

    @property
    def Vh(self) -> np.ndarray:
        """Equivalent full-resolution matrix diag(beta*) X^H."""
        return self.beta.conj()[:, None] * self.Xh

    def mse(self, H: np.ndarray, Es: float, N0: float) -> float:
        return mse_closed_form(self.Vh, H, Es, N0)

    def mse_per_ue(self, H: np.ndarray, Es: float, N0: float) -> np.ndarray:
        return mse_per_ue(self.Vh, H, Es, N0)

    def to_dict(self) -> Dict[str, Any]:
        """
        JSON form: X lists the vectors x_u row by row (X^H is its conjugate),
        beta the per-UE scales.
        """
        return {
            'B': self.B,
            'U': self.U,
            'K': self.K,
            'method': self.method,
            'X': jsonio.encode_matrix(self.X),
            'beta': jsonio.encode_vector(self.beta),
            'metadata': self.metadata,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'FiniteAlphabetEqualizer':
        X = jsonio.decode_matrix(data['X'])
        fae = cls(
            Xh=X.conj(),
            beta=jsonio.decode_vector(data['beta']),
            K=int(data['K']),
            method=data.get('method', ''),
            metadata=dict(data.get('metadata', {})),
        )
        if fae.B != int(data.get('B', fae.B)) or fae.U != int(data.get('U', fae.U)):
            raise DimensionError("Declared B/U do not match the stored matrix")
        return fae

    def __repr__(self) -> str:
        return f"<FiniteAlphabetEqualizer {self.method} U={self.U} B={self.B} K={self.K}>"
