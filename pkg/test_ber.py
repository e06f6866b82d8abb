"""
Tests for the Monte-Carlo BER harness and the float/bit-exact consistency
check. System sizes are kept small so the suite stays fast.
"""

import csv

import numpy as np
import pytest

from ber import (
    CURVE_COLUMNS,
    TRIALS_PER_ROUND,
    BerPoint,
    BerSimulator,
    SweepConfig,
    ber_sweep,
    datapath_consistency,
    equalize_block,
    find_operating_point,
    relative_deviation,
    run_trial,
    trial_seed,
    write_curve_csv,
)
from bitsim import BetaMode
from fame import design_equalizer
from sysmodel import generate_rayleigh_channel
from utils.errors import ConfigError


def small(**overrides):
    base = dict(B=8, U=2, constellation='QPSK', method='fame_fbs', K=1,
                snr_points=[0.0, 6.0], min_errors=40, max_trials=16,
                vectors_per_trial=20, seed=7, threads=1)
    base.update(overrides)
    return SweepConfig(**base)


class TestSweepConfig:
    def test_defaults_validate(self):
        SweepConfig().validate()

    def test_labels(self):
        assert SweepConfig(method='lmmse').label == 'lmmse'
        assert SweepConfig(method='FAME-FBS', K=2).label == 'fame_fbs_K2'
        assert SweepConfig(datapath='ppac', L=7).label == 'fame_fbs_K1_ppac_L7'

    @pytest.mark.parametrize("overrides", [
        {'U': 0},
        {'B': 2, 'U': 4},
        {'min_errors': 0},
        {'max_trials': 0},
        {'vectors_per_trial': 0},
        {'snr_points': []},
        {'method': 'zf'},
        {'datapath': 'gpu'},
        {'method': 'lmmse', 'datapath': 'ppac'},
        {'datapath': 'ppac', 'L': 1},
        {'datapath': 'mac', 'scale': -1.0},
        {'datapath': 'ppac', 'loading': 0.0},
        {'seed': -1},
        {'threads': 0},
        {'constellation': '8PSK'},
        {'beta_mode': 'double'},
        {'fbs_iters': 0},
        {'fbs_step': -0.1},
        {'fbs_alternations': 0},
        {'fbs_phase_starts': 0},
        {'fbs_sweeps': -1},
    ])
    def test_invalid(self, overrides):
        with pytest.raises(ConfigError):
            SweepConfig(**overrides).validate()

    def test_dict_round_trip(self):
        cfg = small(datapath='mac', M=4, beta_mode='fixed(12)')
        assert SweepConfig.from_dict(cfg.to_dict()) == cfg
        assert cfg.beta == BetaMode('fixed', frac_bits=12)

    def test_unknown_keys(self):
        with pytest.raises(ConfigError):
            SweepConfig.from_dict({'B': 8, 'antennas': 8})

    def test_fbs_options(self):
        cfg = SweepConfig().fbs_config()
        assert cfg.step_size_rule == 'inverse-lipschitz'
        assert (cfg.max_iters, cfg.proj_alternations, cfg.phase_starts, cfg.local_sweeps) == (100, 3, 8, 20)
        cfg = SweepConfig(fbs_iters=7, fbs_step=0.02, fbs_alternations=2, fbs_phase_starts=1,
                          fbs_sweeps=0).fbs_config()
        assert cfg.step_size_rule == 'fixed'
        assert cfg.step_size == 0.02
        assert (cfg.max_iters, cfg.proj_alternations, cfg.phase_starts, cfg.local_sweeps) == (7, 2, 1, 0)

    def test_fbs_options_reach_the_design(self):
        cfg = SweepConfig(B=8, U=2, fbs_iters=4, fbs_step=0.01, fbs_phase_starts=2)
        H = generate_rayleigh_channel(8, 2, 1)
        fae = design_equalizer(cfg.method_key, H, 1.0, 0.1, cfg.K, cfg.fbs_config())
        assert fae.metadata['step_size'] == 0.01
        assert fae.metadata['max_iters'] == 4
        assert fae.metadata['phase_starts'] == 2


class TestBerPoint:
    def test_counters(self):
        p = BerPoint(snr_db=0.0, trials=2, bit_errors=25, bits=100)
        assert p.ber == 0.25
        assert p.stderr == pytest.approx(np.sqrt(0.25 * 0.75 / 100))

    def test_empty(self):
        p = BerPoint(snr_db=0.0)
        assert p.ber == 0.0
        assert p.stderr == 0.0


class TestSweep:
    def test_noiseless_lmmse(self):
        cfg = SweepConfig(B=16, U=2, constellation='QPSK', method='lmmse', snr_points=[60.0],
                          min_errors=1, max_trials=4, vectors_per_trial=50, threads=1)
        curve = ber_sweep(cfg)
        assert curve.point(60.0).bit_errors == 0
        assert curve.point(60.0).trials == 4
        assert curve.ber == [0.0]

    def test_identical_across_thread_counts(self):
        serial = ber_sweep(small(threads=1))
        parallel = ber_sweep(small(threads=4))
        assert [(p.trials, p.bit_errors, p.bits) for p in serial.points] == \
            [(p.trials, p.bit_errors, p.bits) for p in parallel.points]

    def test_seed_changes_outcome(self):
        a = ber_sweep(small(seed=1, min_errors=10_000))
        b = ber_sweep(small(seed=2, min_errors=10_000))
        assert [p.bit_errors for p in a.points] != [p.bit_errors for p in b.points]

    def test_stopping_rule(self):
        curve = ber_sweep(small(snr_points=[-5.0], min_errors=1, max_trials=1000))
        assert curve.points[0].trials == TRIALS_PER_ROUND
        capped = ber_sweep(small(snr_points=[30.0], min_errors=10_000, max_trials=5))
        assert capped.points[0].trials == 5

    def test_ber_decreases_with_snr(self):
        curve = ber_sweep(small(snr_points=[-5.0, 15.0], method='lmmse', min_errors=10_000))
        assert curve.ber[0] > curve.ber[1]

    def test_fame_beats_flmmse_at_one_bit(self):
        common = dict(B=32, U=4, constellation='16QAM', K=1, min_errors=2000,
                      max_trials=400, vectors_per_trial=100, seed=3, threads=1)
        snr, _ = find_operating_point(SweepConfig(method='lmmse', **common), 1e-2, [-2.0, 0.0, 2.0])
        fame = ber_sweep(SweepConfig(method='fame_fbs', snr_points=[snr], **common)).points[0]
        flmmse = ber_sweep(SweepConfig(method='flmmse', snr_points=[snr], **common)).points[0]
        assert flmmse.ber - fame.ber > 3 * np.hypot(flmmse.stderr, fame.stderr)

    def test_bit_exact_datapaths_run(self):
        for datapath in ('ppac', 'mac'):
            curve = ber_sweep(small(datapath=datapath, L=2, M=2))
            assert all(0.0 <= b <= 1.0 for b in curve.ber)

    def test_simulator_stats(self):
        sim = BerSimulator(threads=1)
        sim.sweep(small())
        stats = sim.get_stats()
        assert stats['curves'] == 1
        assert stats['points'] == 2
        assert stats['trials'] > 0
        assert 'Bit errors' in sim.get_summary()

    def test_csv(self, tmp_path):
        curve = ber_sweep(small())
        path = write_curve_csv(curve, tmp_path / f'ber_{curve.label}.csv')
        with open(path, newline='') as f:
            rows = list(csv.reader(f))
        assert rows[0] == CURVE_COLUMNS
        assert [float(r[0]) for r in rows[1:]] == [0.0, 6.0]


class TestTrials:
    def test_trial_is_reproducible(self):
        cfg = small()
        a = run_trial(cfg, 0.0, trial_seed(cfg.seed, 0, 3))
        b = run_trial(cfg, 0.0, trial_seed(cfg.seed, 0, 3))
        assert (a.bit_errors, a.bits) == (b.bit_errors, b.bits)
        assert a.bits == 2 * 20 * 2

    def test_compare_float_returns_both(self):
        cfg = small(datapath='ppac', L=7)
        outcome = run_trial(cfg, 6.0, trial_seed(cfg.seed, 1, 0), compare_float=True)
        assert outcome.shat.shape == outcome.reference.shape == (2, 20)

    def test_fixed_scale(self):
        cfg = small(datapath='ppac', L=4, scale=0.25)
        rng = np.random.default_rng(0)
        H = generate_rayleigh_channel(8, 2, rng)
        eq = design_equalizer('fame_fbs', H, 1.0, 0.1, 1)
        y = 0.25 * (rng.integers(-8, 8, size=(8, 3)) + 1j * rng.integers(-8, 8, size=(8, 3)))
        np.testing.assert_allclose(equalize_block(cfg, eq, y), eq.Vh @ y, rtol=1e-12, atol=1e-12)

    def test_relative_deviation(self):
        ref = np.array([3.0 + 4.0j])
        assert relative_deviation(ref, ref) == 0.0
        assert relative_deviation(ref * 1.01, ref) == pytest.approx(0.01)
        assert relative_deviation(np.zeros(1), np.zeros(1)) == 0.0


class TestConsistency:
    def test_high_resolution_tracks_float(self):
        cfg = small(datapath='ppac', L=12, loading=6.0, snr_points=[0.0, 10.0])
        report = datapath_consistency(cfg)
        assert report.max_rel_deviation < 1e-2
        assert len(report.points) == 2
        assert 'max rel. deviation' in report.get_summary()

    def test_mac_matches_ppac(self):
        ppac = datapath_consistency(small(datapath='ppac', L=7, snr_points=[3.0]))
        mac = datapath_consistency(small(datapath='mac', L=7, M=4, snr_points=[3.0]))
        assert ppac.points[0].exact_point == mac.points[0].exact_point
        assert ppac.max_rel_deviation == mac.max_rel_deviation

    def test_seven_bits_within_noise(self):
        report = datapath_consistency(small(datapath='ppac', L=7, snr_points=[0.0, 4.0],
                                            min_errors=100, max_trials=32))
        assert report.within_noise(3.0)

    def test_float_datapath_rejected(self):
        with pytest.raises(ConfigError):
            datapath_consistency(small())


def test_operating_point():
    cfg = SweepConfig(B=32, U=4, constellation='16QAM', min_errors=200, max_trials=64,
                      vectors_per_trial=100, threads=1)
    snr, curve = find_operating_point(cfg, 1e-2, [-6.0, -3.0, 0.0, 3.0, 6.0])
    assert curve.label == 'lmmse'
    assert -3.0 <= snr <= 3.0
    with pytest.raises(ConfigError):
        find_operating_point(cfg, 1.5, [0.0])
