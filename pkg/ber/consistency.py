"""
BER Harness: Datapath Consistency
Runs identical trials through the float and a bit-exact datapath and reports
the estimate deviation and BER difference between them.
"""

import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from utils.errors import ConfigError
from .config import SweepConfig
from .sweep import BerPoint, BerSimulator, TrialOutcome


@dataclass
class ConsistencyPoint:
    """Float versus bit-exact results at one SNR."""
    snr_db: float
    float_point: BerPoint
    exact_point: BerPoint
    max_rel_deviation: float

    @property
    def ber_delta(self) -> float:
        """Bit-exact BER minus float BER."""
        return self.exact_point.ber - self.float_point.ber

    @property
    def delta_stderr(self) -> float:
        return math.hypot(self.float_point.stderr, self.exact_point.stderr)

    def within_noise(self, n_sigma: float = 3.0) -> bool:
        return abs(self.ber_delta) <= n_sigma * self.delta_stderr


@dataclass
class ConsistencyReport:
    datapath: str
    L: int
    points: List[ConsistencyPoint] = field(default_factory=list)

    @property
    def max_rel_deviation(self) -> float:
        return max((p.max_rel_deviation for p in self.points), default=0.0)

    @property
    def max_ber_delta(self) -> float:
        return max((abs(p.ber_delta) for p in self.points), default=0.0)

    def within_noise(self, n_sigma: float = 3.0) -> bool:
        return all(p.within_noise(n_sigma) for p in self.points)

    def get_summary(self) -> str:
        lines = [f"Datapath consistency ({self.datapath}, L={self.L}):"]
        for p in self.points:
            lines.append(
                f"  {p.snr_db:6.2f} dB  float BER {p.float_point.ber:.3e}  "
                f"bit-exact BER {p.exact_point.ber:.3e}  delta {p.ber_delta:+.2e}  "
                f"max rel. deviation {p.max_rel_deviation:.2e}"
            )
        return "\n".join(lines)


def relative_deviation(shat: np.ndarray, reference: np.ndarray) -> float:
    """||shat - reference||_F / ||reference||_F over one trial's block."""
    denom = float(np.linalg.norm(reference))
    if denom == 0.0:
        return float(np.linalg.norm(shat))
    return float(np.linalg.norm(shat - reference)) / denom


def datapath_consistency(cfg: SweepConfig) -> ConsistencyReport:
    """
    Compare bit-exact and float estimates on identical trials.

    The stopping rule counts bit-exact errors; float errors are counted on
    the same trials.

    Args:
        cfg: Sweep configuration with a ppac or mac datapath

    Returns:
        ConsistencyReport with one entry per SNR point
    """
    cfg.validate()
    if cfg.datapath == 'float':
        raise ConfigError("Consistency check needs a bit-exact datapath (ppac or mac)")

    simulator = BerSimulator()
    report = ConsistencyReport(datapath=cfg.datapath, L=cfg.L)
    for i, snr_db in enumerate(cfg.snr_points):
        float_point = BerPoint(snr_db=snr_db)
        deviations: List[float] = []

        def collect(outcome: TrialOutcome) -> None:
            float_point.trials += 1
            float_point.bits += outcome.bits
            float_point.bit_errors += outcome.reference_errors
            deviations.append(relative_deviation(outcome.shat, outcome.reference))

        exact_point = simulator.run_point(cfg, i, on_trial=collect, compare_float=True)
        report.points.append(ConsistencyPoint(
            snr_db=snr_db,
            float_point=float_point,
            exact_point=exact_point,
            max_rel_deviation=max(deviations, default=0.0),
        ))
    return report
