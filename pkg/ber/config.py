"""
BER Harness: Sweep Configuration
"""

from dataclasses import dataclass, field, asdict
from typing import Any, Dict, List, Optional

from bitsim import BetaMode
from fame import METHODS, FbsConfig
from sysmodel import Constellation, get_constellation
from utils.errors import ConfigError

DATAPATHS = ('float', 'ppac', 'mac')


@dataclass
class SweepConfig:
    """
    One BER curve: system size, equalizer, datapath and SNR grid.

    SNR points are Es/N0 in dB. For the bit-exact datapaths the input
    quantizer step is `scale`; when it is None every trial uses
    loading * rms(y) / 2^(L-1), with rms taken per real component.
    """
    B: int = 32
    U: int = 4
    constellation: str = '16QAM'
    method: str = 'fame_fbs'
    K: int = 1
    datapath: str = 'float'
    L: int = 7
    scale: Optional[float] = None
    loading: float = 3.0
    M: int = 1
    beta_mode: str = 'float'
    snr_points: List[float] = field(default_factory=lambda: [0.0])
    min_errors: int = 200
    max_trials: int = 1000
    vectors_per_trial: int = 100
    seed: int = 0
    threads: Optional[int] = None
    fbs_iters: int = 100
    fbs_step: Optional[float] = None  # fixed FBS step; None uses the inverse-Lipschitz rule
    fbs_alternations: int = 3
    fbs_phase_starts: int = 8
    fbs_sweeps: int = 20

    def validate(self) -> None:
        if self.U < 1 or self.B < self.U:
            raise ConfigError(f"Need B >= U >= 1, got B={self.B}, U={self.U}")
        if self.min_errors < 1:
            raise ConfigError(f"min_errors must be >= 1, got {self.min_errors}")
        if self.max_trials < 1:
            raise ConfigError(f"max_trials must be >= 1, got {self.max_trials}")
        if self.vectors_per_trial < 1:
            raise ConfigError(f"vectors_per_trial must be >= 1, got {self.vectors_per_trial}")
        if not self.snr_points:
            raise ConfigError("snr_points must be nonempty")
        if self.method_key not in METHODS:
            raise ConfigError(f"Unknown method '{self.method}' (choose from {', '.join(METHODS)})")
        if self.datapath not in DATAPATHS:
            raise ConfigError(f"Unknown datapath '{self.datapath}' (choose from {', '.join(DATAPATHS)})")
        if self.datapath != 'float':
            if self.method_key == 'lmmse':
                raise ConfigError("Bit-exact datapaths need a finite-alphabet equalizer")
            if self.L < 2:
                raise ConfigError(f"L must be >= 2, got {self.L}")
            if self.scale is not None and not self.scale > 0:
                raise ConfigError(f"scale must be positive, got {self.scale}")
            if not self.loading > 0:
                raise ConfigError(f"loading must be positive, got {self.loading}")
        if self.seed < 0:
            raise ConfigError(f"seed must be nonnegative, got {self.seed}")
        if self.threads is not None and self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")
        get_constellation(self.constellation)
        BetaMode.parse(self.beta_mode)
        self.fbs_config().validate()

    @property
    def method_key(self) -> str:
        return self.method.lower().replace('-', '_')

    @property
    def constellation_obj(self) -> Constellation:
        return get_constellation(self.constellation)

    @property
    def beta(self) -> BetaMode:
        return BetaMode.parse(self.beta_mode)

    @property
    def label(self) -> str:
        """Short curve name such as 'fame_fbs_K1_ppac_L7'."""
        name = self.method_key if self.method_key == 'lmmse' else f"{self.method_key}_K{self.K}"
        if self.datapath != 'float':
            name += f"_{self.datapath}_L{self.L}"
        return name

    def fbs_config(self) -> FbsConfig:
        return FbsConfig(
            max_iters=self.fbs_iters,
            step_size_rule='inverse-lipschitz' if self.fbs_step is None else 'fixed',
            step_size=self.fbs_step,
            proj_alternations=self.fbs_alternations,
            phase_starts=self.fbs_phase_starts,
            local_sweeps=self.fbs_sweeps,
        )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SweepConfig':
        known = cls.__dataclass_fields__
        unknown = set(data) - set(known)
        if unknown:
            raise ConfigError(f"Unknown sweep options: {', '.join(sorted(unknown))}")
        cfg = cls(**data)
        cfg.snr_points = [float(s) for s in cfg.snr_points]
        return cfg
