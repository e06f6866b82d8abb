"""
Tests for the bit-exact PPAC and MAC array emulators.
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from alphabet import complex_values, quantize_input
from bitsim import (
    BetaMode,
    FLOAT,
    ACCUMULATOR_LIMIT,
    MacArrayConfig,
    PpacRow,
    accumulator_bound,
    check_accumulator,
    integer_mvp_oracle,
    mac_cycles,
    mac_mvp,
    ppac_cycles,
    ppac_equalize,
    ppac_load,
    ppac_mvp,
    ppac_mvp_batch,
    ppac_row_op,
    real_decomposition,
    scale_by_beta,
)
from fame import FiniteAlphabetEqualizer, flmmse_design
from utils.errors import AlphabetError, ConfigError, DimensionError


def random_equalizer(rng, B, U, K):
    levels = np.array(complex_values(K))
    Xh = levels[rng.integers(0, len(levels), size=(U, B))]
    beta = rng.standard_normal(U) + 1j * rng.standard_normal(U)
    return FiniteAlphabetEqualizer(Xh=Xh, beta=beta, K=K)


def random_inputs(rng, B, L, N=None):
    lo, hi = -(1 << (L - 1)), 1 << (L - 1)
    shape = B if N is None else (B, N)
    return rng.integers(lo, hi, size=shape), rng.integers(lo, hi, size=shape)


def one_by_one(Xh, K=1):
    return FiniteAlphabetEqualizer(Xh=np.array([[Xh]]), beta=np.array([1.0]), K=K)


class TestLoad:
    def test_single_entry_layout(self):
        arr = ppac_load(one_by_one(1 + 1j))
        assert (arr.n_rows, arr.n_cols) == (2, 2)
        assert_array_equal(arr.row(0, 0).bits, [1, 0])
        assert_array_equal(arr.row(1, 0).bits, [1, 1])
        assert arr.row(0, 0).zero_count == 1
        assert arr.row(1, 0).zero_count == 0

    def test_two_bit_planes(self):
        arr = ppac_load(one_by_one(3 + 3j, K=2))
        assert arr.row(0, 0).bits[0] == 1
        assert arr.row(0, 1).bits[0] == 1
        assert arr.row(0, 0).bits[1] == 0
        assert arr.row(0, 1).bits[1] == 0

    @pytest.mark.parametrize("K", [1, 2, 3])
    def test_stored_matrix_and_zero_count(self, K):
        fae = random_equalizer(np.random.default_rng(K), 6, 3, K)
        arr = ppac_load(fae)
        assert arr.n_rows == 2 * K * 3
        assert_array_equal(arr.stored_matrix(), real_decomposition(fae.Xh))
        assert_array_equal(arr.zero_count, arr.bits.shape[1] - arr.bits.sum(axis=1))

    def test_loaded_array_is_read_only(self):
        arr = ppac_load(one_by_one(1 - 1j))
        with pytest.raises(ValueError):
            arr.bits[0, 0] = 0


class TestRowOp:
    def test_mixed_row(self):
        assert ppac_row_op(PpacRow.from_signs([1, -1, 1]), [1, 1, 0]) == 0

    def test_all_ones(self):
        assert ppac_row_op(PpacRow.from_signs([1] * 5), [1] * 5) == 5

    def test_negative_row(self):
        assert ppac_row_op(PpacRow.from_signs([-1, -1]), [0, 1]) == -1

    def test_equals_inner_product(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            signs = rng.choice([-1, 1], size=9)
            inputs = rng.integers(0, 2, size=9)
            assert ppac_row_op(PpacRow.from_signs(signs), inputs) == int(signs @ inputs)

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            ppac_row_op(PpacRow.from_signs([1, 1]), [1])


class TestPpacMvp:
    def test_bit_serial_trace(self):
        arr = ppac_load(one_by_one(1 + 1j))
        trace = []
        out = ppac_mvp(arr, [-3], [0], 3, trace)
        assert [int(t[0]) for t in trace] == [-1, -2, -3]
        assert out[0] == -3

    def test_complex_product(self):
        arr = ppac_load(one_by_one(1 + 1j))
        # X^H = [1+j] stores x = 1-j
        assert_array_equal(ppac_mvp(arr, [2], [-1], 3), [3, 1])

    def test_zero_input(self):
        arr = ppac_load(random_equalizer(np.random.default_rng(1), 4, 2, 2))
        trace = []
        out = ppac_mvp(arr, np.zeros(4, dtype=int), np.zeros(4, dtype=int), 5, trace)
        assert_array_equal(out, np.zeros(4))
        assert len(trace) == ppac_cycles(5).cycles == 5

    def test_matches_integer_oracle(self):
        rng = np.random.default_rng(2024)
        for _ in range(300):
            K = int(rng.integers(1, 4))
            L = int(rng.choice([4, 7]))
            B = int(rng.integers(1, 65))
            U = int(rng.integers(1, 5))
            fae = random_equalizer(rng, B, U, K)
            y_re, y_im = random_inputs(rng, B, L)
            got = ppac_mvp(ppac_load(fae), y_re, y_im, L)
            assert got.tolist() == integer_mvp_oracle(fae.Xh, y_re, y_im)

    def test_extreme_inputs(self):
        fae = random_equalizer(np.random.default_rng(3), 16, 2, 3)
        for L in (4, 7):
            lo, hi = -(1 << (L - 1)), (1 << (L - 1)) - 1
            for v in (lo, hi):
                y = np.full(16, v)
                got = ppac_mvp(ppac_load(fae), y, -y if v != lo else y, L)
                assert got.tolist() == integer_mvp_oracle(fae.Xh, y, -y if v != lo else y)

    def test_linearity(self):
        rng = np.random.default_rng(4)
        arr = ppac_load(random_equalizer(rng, 8, 2, 2))
        a_re, a_im = random_inputs(rng, 8, 6)
        b_re, b_im = random_inputs(rng, 8, 6)
        total = ppac_mvp(arr, a_re + b_re, a_im + b_im, 7)
        assert_array_equal(total, ppac_mvp(arr, a_re, a_im, 7) + ppac_mvp(arr, b_re, b_im, 7))

    def test_batch_matches_columns(self):
        rng = np.random.default_rng(5)
        arr = ppac_load(random_equalizer(rng, 8, 3, 2))
        Y_re, Y_im = random_inputs(rng, 8, 7, N=6)
        out = ppac_mvp_batch(arr, Y_re, Y_im, 7)
        for n in range(6):
            assert_array_equal(out[:, n], ppac_mvp(arr, Y_re[:, n], Y_im[:, n], 7))

    def test_accepts_fixed_point_vectors(self):
        arr = ppac_load(one_by_one(1 + 1j))
        y_re, y_im = quantize_input(np.array([2 - 1j]), 3, 1.0)
        assert_array_equal(ppac_mvp(arr, y_re, y_im, 3), [3, 1])

    def test_overflow_and_shape(self):
        arr = ppac_load(one_by_one(1 + 1j))
        with pytest.raises(AlphabetError):
            ppac_mvp(arr, [4], [0], 3)
        with pytest.raises(DimensionError):
            ppac_mvp(arr, [1, 1], [0, 0], 3)


class TestEqualize:
    def test_unit_beta_is_complex_mvp(self):
        rng = np.random.default_rng(6)
        fae = random_equalizer(rng, 8, 2, 1)
        fae = FiniteAlphabetEqualizer(Xh=fae.Xh, beta=np.ones(2), K=1)
        arr = ppac_load(fae)
        y_re, y_im = random_inputs(rng, 8, 5)
        raw = ppac_mvp(arr, y_re, y_im, 5)
        assert_array_equal(ppac_equalize(arr, fae.beta, y_re, y_im, 5), raw[:2] + 1j * raw[2:])

    def test_scalar_flmmse_recovers_input(self):
        fae = flmmse_design(np.array([[1.0]]), 1.0, 0.0, 1)
        shat = ppac_equalize(ppac_load(fae), fae.beta, [3], [-2], 4)
        assert shat[0] == 3 - 2j

    def test_fixed_beta_close_to_float(self):
        rng = np.random.default_rng(7)
        mode = BetaMode.parse('fixed(14)')
        for _ in range(50):
            fae = random_equalizer(rng, 32, 4, 2)
            arr = ppac_load(fae)
            y_re, y_im = random_inputs(rng, 32, 7)
            ref = ppac_equalize(arr, fae.beta, y_re, y_im, 7)
            fixed = ppac_equalize(arr, fae.beta, y_re, y_im, 7, mode)
            assert np.all(np.abs(fixed - ref) <= 2.0 ** -12 * np.abs(ref) + 1e-300)

    def test_zero_accumulator_fixed(self):
        out = scale_by_beta(np.zeros(2, dtype=int), np.zeros(2, dtype=int),
                            np.array([0.3 + 0.1j, -2.0]), BetaMode('fixed'))
        assert_array_equal(out, [0, 0])


class TestBetaMode:
    @pytest.mark.parametrize("text,frac", [('fixed', 14), ('fixed(12)', 12), ('fixed:20', 20)])
    def test_parse_fixed(self, text, frac):
        mode = BetaMode.parse(text)
        assert mode.kind == 'fixed'
        assert mode.frac_bits == frac

    def test_parse_float(self):
        assert BetaMode.parse(' Float ') == FLOAT
        assert str(BetaMode.parse('fixed(10)')) == 'fixed(10)'

    @pytest.mark.parametrize("text", ['double', 'fixed(1)', 'fixed(40)', 'fixed-3'])
    def test_parse_errors(self, text):
        with pytest.raises(ConfigError):
            BetaMode.parse(text)


class TestMacArray:
    def test_cycle_counts(self):
        assert mac_cycles(256, 1).cycles == 256
        assert mac_cycles(256, 1).architecture == 'mac_original'
        assert mac_cycles(256, 16).cycles == 20
        assert mac_cycles(256, 16).architecture == 'mac_optimized'
        assert ppac_cycles(7).cycles == 7

    @pytest.mark.parametrize("K", [1, 2, 3])
    @pytest.mark.parametrize("L", [4, 7])
    def test_matches_ppac(self, K, L):
        rng = np.random.default_rng(10 * K + L)
        fae = random_equalizer(rng, 32, 4, K)
        arr = ppac_load(fae)
        for M in (1, 4, 16, 32):
            cfg = MacArrayConfig(M=M, B=32, U=4)
            y_re, y_im = random_inputs(rng, 32, L)
            shat, report = mac_mvp(fae, y_re, y_im, L, cfg)
            assert_array_equal(shat, ppac_equalize(arr, fae.beta, y_re, y_im, L))
            assert report.cycles == 32 // M + int(np.log2(M))

    def test_block_input(self):
        rng = np.random.default_rng(11)
        fae = random_equalizer(rng, 16, 2, 2)
        Y_re, Y_im = random_inputs(rng, 16, 6, N=5)
        shat, _ = mac_mvp(fae, Y_re, Y_im, 6, MacArrayConfig(4, 16, 2))
        assert shat.shape == (2, 5)
        assert_array_equal(shat, ppac_equalize(ppac_load(fae), fae.beta, Y_re, Y_im, 6))

    @pytest.mark.parametrize("M", [0, 3, 64])
    def test_invalid_M(self, M):
        with pytest.raises(ConfigError):
            MacArrayConfig(M=M, B=32, U=4).validate()

    def test_size_mismatch(self):
        fae = random_equalizer(np.random.default_rng(12), 8, 2, 1)
        with pytest.raises(DimensionError):
            mac_mvp(fae, np.zeros(8, dtype=int), np.zeros(8, dtype=int), 4, MacArrayConfig(2, 16, 2))


class TestAccumulatorRange:
    def test_bound_formula(self):
        assert accumulator_bound(1, 1, 3) == 2 * 4
        assert accumulator_bound(3, 256, 7) == 7 * 512 * 64
        check_accumulator(3, 256, 16)

    def test_bound_covers_worst_case(self):
        fae = FiniteAlphabetEqualizer(Xh=np.full((1, 4), 3 + 3j), beta=np.ones(1), K=2)
        y = np.full(4, -(1 << 5))
        got = ppac_mvp(ppac_load(fae), y, y, 6)
        assert max(abs(v) for v in got.tolist()) <= accumulator_bound(2, 4, 6)

    def test_wide_words_rejected(self):
        fae = random_equalizer(np.random.default_rng(13), 8, 1, 1)
        y = np.full(8, -(1 << 61), dtype=np.int64)
        assert accumulator_bound(1, 8, 62) > ACCUMULATOR_LIMIT
        with pytest.raises(ConfigError):
            ppac_mvp(ppac_load(fae), y, y, 62)
        with pytest.raises(ConfigError):
            ppac_mvp_batch(ppac_load(fae), y[:, None], y[:, None], 62)
        with pytest.raises(ConfigError):
            mac_mvp(fae, y, y, 62, MacArrayConfig(1, 8, 1))

    def test_wide_but_safe_words_are_exact(self):
        rng = np.random.default_rng(14)
        fae = random_equalizer(rng, 8, 2, 3)
        y_re, y_im = random_inputs(rng, 8, 40)
        got = ppac_mvp(ppac_load(fae), y_re, y_im, 40)
        assert got.tolist() == integer_mvp_oracle(fae.Xh, y_re, y_im)
        lo = np.full(8, -(1 << 39), dtype=np.int64)
        assert ppac_mvp(ppac_load(fae), lo, lo, 40).tolist() == integer_mvp_oracle(fae.Xh, lo, lo)

    def test_fixed_beta_rejects_oversized_accumulator(self):
        big = np.array([1 << 50], dtype=np.int64)
        with pytest.raises(ConfigError):
            scale_by_beta(big, np.zeros(1, dtype=np.int64), np.array([0.5 + 0.5j]), BetaMode.parse('fixed(14)'))
        out = scale_by_beta(big, np.zeros(1, dtype=np.int64), np.array([0.5 + 0.5j]), FLOAT)
        assert abs(out[0]) == pytest.approx(2.0 ** 50 * abs(0.5 + 0.5j))
