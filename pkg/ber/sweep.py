"""
BER Harness: Monte-Carlo Sweeps
Uncoded bit-error rate over i.i.d. Rayleigh channels, one fresh channel and
one equalizer design per trial, through the float or bit-exact datapaths.
"""

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from alphabet import quantize_input
from bitsim import MacArrayConfig, mac_mvp, ppac_equalize, ppac_load
from fame import FiniteAlphabetEqualizer, design_equalizer
from sysmodel import detect, generate_rayleigh_channel, modulate, simulate_uplink, snr_db_to_n0
from utils.errors import ConfigError
from utils.settings import load_settings
from .config import SweepConfig

# Trials evaluated between two checks of the stopping rule. Fixed so results
# do not depend on the number of worker threads.
TRIALS_PER_ROUND = 8

CURVE_COLUMNS = ['snr_dB', 'trials', 'bit_errors', 'ber', 'stderr']


@dataclass
class BerPoint:
    """Counters for one SNR point."""
    snr_db: float
    trials: int = 0
    bit_errors: int = 0
    bits: int = 0

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits if self.bits else 0.0

    @property
    def stderr(self) -> float:
        if not self.bits:
            return 0.0
        p = self.ber
        return math.sqrt(p * (1.0 - p) / self.bits)


@dataclass
class BerCurve:
    """BER versus Es/N0 for one equalizer and datapath."""
    label: str
    points: List[BerPoint] = field(default_factory=list)

    @property
    def snr_db(self) -> List[float]:
        return [p.snr_db for p in self.points]

    @property
    def ber(self) -> List[float]:
        return [p.ber for p in self.points]

    def point(self, snr_db: float) -> BerPoint:
        for p in self.points:
            if p.snr_db == snr_db:
                return p
        raise KeyError(snr_db)


@dataclass
class TrialOutcome:
    bit_errors: int
    bits: int
    shat: Optional[np.ndarray] = None
    reference: Optional[np.ndarray] = None
    reference_errors: int = 0


def trial_seed(seed: int, snr_index: int, trial_index: int) -> np.random.SeedSequence:
    """Independent stream per (master seed, SNR index, trial index)."""
    return np.random.SeedSequence([seed, snr_index, trial_index])


def input_scale(y: np.ndarray, L: int, loading: float) -> float:
    """loading * rms(y) / 2^(L-1), rms over real and imaginary components."""
    rms = math.sqrt(float(np.mean(y.real ** 2 + y.imag ** 2)) / 2.0)
    if rms == 0.0:
        return 1.0
    return loading * rms / (1 << (L - 1))


def equalize_block(cfg: SweepConfig, eq: Union[np.ndarray, FiniteAlphabetEqualizer],
                   y: np.ndarray, datapath: Optional[str] = None) -> np.ndarray:
    """
    Apply a designed equalizer to a B x N block of receive vectors.

    Args:
        cfg: Sweep configuration (L, scale, M, beta mode)
        eq: L-MMSE matrix or finite-alphabet equalizer
        y: Receive vectors
        datapath: Override for cfg.datapath

    Returns:
        U x N symbol estimates
    """
    datapath = datapath or cfg.datapath
    if datapath == 'float' or not isinstance(eq, FiniteAlphabetEqualizer):
        Vh = eq.Vh if isinstance(eq, FiniteAlphabetEqualizer) else eq
        return Vh @ y

    scale = cfg.scale if cfg.scale is not None else input_scale(y, cfg.L, cfg.loading)
    y_re, y_im = quantize_input(y, cfg.L, scale)
    if datapath == 'ppac':
        raw = ppac_equalize(ppac_load(eq), eq.beta, y_re, y_im, cfg.L, cfg.beta)
    elif datapath == 'mac':
        raw, _ = mac_mvp(eq, y_re, y_im, cfg.L, MacArrayConfig(cfg.M, eq.B, eq.U), cfg.beta)
    else:
        raise ConfigError(f"Unknown datapath '{datapath}'")
    return scale * raw


def run_trial(cfg: SweepConfig, snr_db: float, seq: np.random.SeedSequence,
              compare_float: bool = False) -> TrialOutcome:
    """
    One channel draw, one design, vectors_per_trial transmissions.

    Args:
        compare_float: Also return float-datapath estimates of the same block
    """
    rng = np.random.default_rng(seq)
    const = cfg.constellation_obj
    Es = const.Es
    N0 = snr_db_to_n0(snr_db, Es)

    H = generate_rayleigh_channel(cfg.B, cfg.U, rng)
    n_bits = cfg.U * cfg.vectors_per_trial * const.bits_per_symbol
    bits = rng.integers(0, 2, size=n_bits)
    s = modulate(bits, const).reshape(cfg.U, cfg.vectors_per_trial)
    y = simulate_uplink(H, s, N0, seed=rng)

    eq = design_equalizer(cfg.method_key, H, Es, N0, cfg.K, cfg.fbs_config())
    shat = equalize_block(cfg, eq, y)
    errors = int(np.count_nonzero(detect(shat, const) != bits))

    if not compare_float:
        return TrialOutcome(bit_errors=errors, bits=n_bits)
    reference = equalize_block(cfg, eq, y, datapath='float')
    return TrialOutcome(
        bit_errors=errors,
        bits=n_bits,
        shat=shat,
        reference=reference,
        reference_errors=int(np.count_nonzero(detect(reference, const) != bits)),
    )


class BerSimulator:
    """Runs BER sweeps and keeps counters across them."""

    def __init__(self, threads: Optional[int] = None):
        """
        Initialize simulator

        Args:
            threads: Worker cap (None: FAEQ_THREADS or machine parallelism)
        """
        self.threads = threads
        self.stats = {
            'curves': 0,
            'points': 0,
            'trials': 0,
            'bits': 0,
            'bit_errors': 0,
        }

    def _workers(self, cfg: SweepConfig) -> int:
        return cfg.threads or self.threads or load_settings().threads

    def run_point(
        self,
        cfg: SweepConfig,
        snr_index: int,
        on_trial: Optional[Callable[[TrialOutcome], None]] = None,
        compare_float: bool = False,
        executor: Optional[ThreadPoolExecutor] = None,
    ) -> BerPoint:
        """
        Simulate one SNR point until min_errors or max_trials.

        Trials are processed in rounds of TRIALS_PER_ROUND; the stopping rule
        is checked between rounds only.
        """
        snr_db = cfg.snr_points[snr_index]
        point = BerPoint(snr_db=snr_db)
        next_trial = 0
        while point.bit_errors < cfg.min_errors and next_trial < cfg.max_trials:
            batch = range(next_trial, min(next_trial + TRIALS_PER_ROUND, cfg.max_trials))
            seqs = [trial_seed(cfg.seed, snr_index, t) for t in batch]
            call = partial(run_trial, cfg, snr_db, compare_float=compare_float)
            outcomes = list(executor.map(call, seqs)) if executor else [call(q) for q in seqs]
            for outcome in outcomes:
                point.trials += 1
                point.bits += outcome.bits
                point.bit_errors += outcome.bit_errors
                if on_trial is not None:
                    on_trial(outcome)
            next_trial = batch.stop

        self.stats['points'] += 1
        self.stats['trials'] += point.trials
        self.stats['bits'] += point.bits
        self.stats['bit_errors'] += point.bit_errors
        return point

    def sweep(self, cfg: SweepConfig) -> BerCurve:
        """
        Run every SNR point of a configuration.

        Args:
            cfg: Validated or unvalidated sweep configuration

        Returns:
            BerCurve, identical for identical cfg whatever the thread count
        """
        cfg.validate()
        curve = BerCurve(label=cfg.label)
        workers = self._workers(cfg)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                for i in range(len(cfg.snr_points)):
                    curve.points.append(self.run_point(cfg, i, executor=pool))
        else:
            for i in range(len(cfg.snr_points)):
                curve.points.append(self.run_point(cfg, i))
        self.stats['curves'] += 1
        return curve

    def get_stats(self) -> Dict:
        """Get simulation statistics"""
        return self.stats.copy()

    def get_summary(self) -> str:
        """Generate human-readable summary"""
        lines = ["BER Simulation:"]
        lines.append(f"  Curves: {self.stats['curves']}")
        lines.append(f"  SNR points: {self.stats['points']}")
        lines.append(f"  Trials: {self.stats['trials']}")
        lines.append(f"  Bits simulated: {self.stats['bits']}")
        lines.append(f"  Bit errors: {self.stats['bit_errors']}")
        return "\n".join(lines)


def ber_sweep(cfg: SweepConfig) -> BerCurve:
    """Functional wrapper around BerSimulator.sweep."""
    return BerSimulator().sweep(cfg)


def find_operating_point(cfg: SweepConfig, target_ber: float,
                         snr_grid: Sequence[float]) -> Tuple[float, BerCurve]:
    """
    SNR on a grid where float L-MMSE BER is closest to a target (log scale).

    Args:
        cfg: Supplies system size, constellation, seed and stopping rule
        target_ber: e.g. 1e-2
        snr_grid: Candidate Es/N0 values in dB

    Returns:
        (selected SNR in dB, the L-MMSE curve over the grid)
    """
    if not 0 < target_ber < 1:
        raise ConfigError(f"target_ber must lie in (0, 1), got {target_ber}")
    ref = SweepConfig(**{**cfg.to_dict(), 'method': 'lmmse', 'datapath': 'float',
                         'snr_points': [float(s) for s in snr_grid]})
    curve = ber_sweep(ref)
    floor = 0.5 / max(p.bits for p in curve.points)

    def distance(p: BerPoint) -> float:
        return abs(math.log10(max(p.ber, floor)) - math.log10(target_ber))

    best = min(curve.points, key=distance)
    return best.snr_db, curve


def curve_rows(curve: BerCurve) -> List[List[str]]:
    return [
        [format(p.snr_db, '.12g'), str(p.trials), str(p.bit_errors),
         format(p.ber, '.12g'), format(p.stderr, '.12g')]
        for p in curve.points
    ]


def write_curve_csv(curve: BerCurve, path: Union[str, Path]) -> Path:
    """One CSV per curve; SNR is Es/N0 in dB."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(CURVE_COLUMNS)
        writer.writerows(curve_rows(curve))
    return path
