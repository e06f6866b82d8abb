"""
End-to-end tests of the faeq.py command line.
"""

import csv
import json

import pytest

import faeq
from hwcost import CSV_COLUMNS
from utils.manifest import MANIFEST_NAME


def read_json(path):
    with open(path, encoding='utf-8') as f:
        return json.load(f)


def read_csv(path):
    with open(path, newline='', encoding='utf-8') as f:
        return list(csv.reader(f))


class TestDesign:
    def test_scalar_flmmse(self, tmp_path, capsys):
        code = faeq.run(['design', '--B', '1', '--U', '1', '--K', '1', '--method', 'flmmse',
                         '--channel', 'identity', '--out-dir', str(tmp_path)])
        assert code == faeq.EXIT_OK
        printed = json.loads(capsys.readouterr().out)
        assert printed['X'] == [[[1.0, 1.0]]]
        assert printed['beta'] == [[0.5, -0.5]]
        assert printed['mse'] == pytest.approx(0.0, abs=1e-15)
        assert read_json(tmp_path / 'equalizer.json') == printed

        manifest = read_json(tmp_path / MANIFEST_NAME)
        assert manifest['command'] == 'design'
        assert manifest['outputs'] == ['channel.json', 'equalizer.json']
        assert manifest['config']['method'] == 'flmmse'

    def test_lmmse_document(self, tmp_path, capsys):
        code = faeq.run(['design', '--B', '4', '--U', '2', '--method', 'lmmse', '--snr-db', '10',
                         '--out-dir', str(tmp_path)])
        assert code == faeq.EXIT_OK
        doc = read_json(tmp_path / 'equalizer.json')
        assert doc['method'] == 'lmmse'
        assert len(doc['Wh']) == 2 and len(doc['Wh'][0]) == 4
        assert doc['condition_number'] >= 1.0

    def test_channel_file(self, tmp_path, capsys):
        channel = tmp_path / 'H.json'
        channel.write_text(json.dumps({'B': 2, 'U': 1, 'H': [[[1.0, 0.0]], [[1.0, 0.0]]]}))
        code = faeq.run(['design', '--channel', str(channel), '--method', 'exhaustive',
                         '--out-dir', str(tmp_path / 'out')])
        assert code == faeq.EXIT_OK
        assert read_json(tmp_path / 'out' / 'equalizer.json')['mse'] == pytest.approx(0.0, abs=1e-15)

    def test_conflicting_noise_options(self, tmp_path, capsys):
        code = faeq.run(['design', '--B', '2', '--U', '1', '--n0', '0.1', '--snr-db', '3',
                         '--out-dir', str(tmp_path)])
        assert code == faeq.EXIT_RUNTIME

    @pytest.mark.parametrize('H', [
        [[['a', 0.0]]],
        [[[float('nan'), 0.0]], [[1.0, 0.0]]],
        [[[1.0, float('inf')]]],
        'identity',
        [[[1.0, 0.0], [2.0]]],
    ])
    def test_malformed_channel_file(self, tmp_path, capsys, H):
        channel = tmp_path / 'H.json'
        channel.write_text(json.dumps({'H': H}))
        code = faeq.run(['design', '--channel', str(channel), '--out-dir', str(tmp_path / 'out')])
        assert code == faeq.EXIT_RUNTIME
        assert 'Traceback' not in capsys.readouterr().err

    def test_channel_file_not_an_object(self, tmp_path, capsys):
        channel = tmp_path / 'H.json'
        channel.write_text(json.dumps([[[1.0, 0.0]]]))
        code = faeq.run(['design', '--channel', str(channel), '--out-dir', str(tmp_path / 'out')])
        assert code == faeq.EXIT_RUNTIME

    def test_fbs_options(self, tmp_path, capsys):
        code = faeq.run(['design', '--B', '8', '--U', '2', '--snr-db', '5', '--fbs-iters', '6',
                         '--fbs-step', '0.01', '--fbs-phase-starts', '2', '--fbs-sweeps', '0',
                         '--out-dir', str(tmp_path)])
        assert code == faeq.EXIT_OK
        meta = read_json(tmp_path / 'equalizer.json')['metadata']
        assert meta == {'step_size': 0.01, 'max_iters': 6, 'phase_starts': 2, 'local_sweeps': 0}
        config = read_json(tmp_path / MANIFEST_NAME)['config']
        assert config['fbs_iters'] == 6 and config['fbs_step'] == 0.01

    @pytest.mark.parametrize('flag,value', [('--fbs-iters', '0'), ('--fbs-step', '-1'),
                                            ('--fbs-alternations', '0'), ('--fbs-sweeps', '-2')])
    def test_invalid_fbs_options(self, tmp_path, capsys, flag, value):
        code = faeq.run(['design', '--B', '4', '--U', '2', flag, value, '--out-dir', str(tmp_path)])
        assert code == faeq.EXIT_RUNTIME

    def test_manifest_replay_is_byte_identical(self, tmp_path, capsys):
        first, second = tmp_path / 'a', tmp_path / 'b'
        assert faeq.run(['design', '--B', '8', '--U', '2', '--K', '2', '--snr-db', '5',
                         '--seed', '11', '--out-dir', str(first)]) == faeq.EXIT_OK
        assert faeq.run(['design', '--config', str(first / MANIFEST_NAME),
                         '--out-dir', str(second)]) == faeq.EXIT_OK
        for name in ('equalizer.json', 'channel.json'):
            assert (first / name).read_bytes() == (second / name).read_bytes()


class TestEqualize:
    @pytest.fixture
    def equalizer(self, tmp_path, capsys):
        faeq.run(['design', '--B', '1', '--U', '1', '--method', 'flmmse', '--channel', 'identity',
                  '--out-dir', str(tmp_path)])
        samples = tmp_path / 'y.json'
        samples.write_text(json.dumps({'y': [[[3.0, -2.0]], [[1.0, 1.0]]]}))
        return tmp_path / 'equalizer.json', samples

    def test_float(self, tmp_path, equalizer):
        eq, samples = equalizer
        code = faeq.run(['equalize', '--equalizer', str(eq), '--samples', str(samples),
                         '--out-dir', str(tmp_path / 'f')])
        assert code == faeq.EXIT_OK
        doc = read_json(tmp_path / 'f' / 'equalized.json')
        assert doc['vectors'] == 2
        assert doc['shat'] == [[[3.0, -2.0]], [[1.0, 1.0]]]

    def test_ppac(self, tmp_path, equalizer):
        eq, samples = equalizer
        code = faeq.run(['equalize', '--equalizer', str(eq), '--samples', str(samples),
                         '--datapath', 'ppac', '--L', '4', '--scale', '1',
                         '--out-dir', str(tmp_path / 'p')])
        assert code == faeq.EXIT_OK
        doc = read_json(tmp_path / 'p' / 'equalized.json')
        assert doc['cycles_per_vector'] == 4
        assert doc['total_cycles'] == 8
        assert doc['architecture'] == 'ppac'
        assert doc['shat'] == [[[3.0, -2.0]], [[1.0, 1.0]]]

    def test_wrong_sample_length(self, tmp_path, equalizer):
        eq, _ = equalizer
        samples = tmp_path / 'bad.json'
        samples.write_text(json.dumps({'y': [[1.0, 0.0], [0.0, 1.0]]}))
        code = faeq.run(['equalize', '--equalizer', str(eq), '--samples', str(samples),
                         '--out-dir', str(tmp_path / 'x')])
        assert code == faeq.EXIT_RUNTIME

    @pytest.mark.parametrize('doc', [
        {'y': 5},
        {'y': []},
        {'y': [['a', 0.0]]},
        {'y': [[[float('nan'), 0.0]]]},
        {'y': [[1.0, 0.0], 'x']},
        {'samples': [[1.0, 0.0]]},
        [[1.0, 0.0]],
    ])
    def test_malformed_samples(self, tmp_path, capsys, equalizer, doc):
        eq, _ = equalizer
        samples = tmp_path / 'bad.json'
        samples.write_text(json.dumps(doc))
        for datapath in ('float', 'ppac'):
            code = faeq.run(['equalize', '--equalizer', str(eq), '--samples', str(samples),
                             '--datapath', datapath, '--out-dir', str(tmp_path / datapath)])
            assert code == faeq.EXIT_RUNTIME
        assert 'Traceback' not in capsys.readouterr().err


class TestHw:
    def test_cost_tables(self, tmp_path):
        code = faeq.run(['hw', '--out-dir', str(tmp_path)])
        assert code == faeq.EXIT_OK
        rows = read_csv(tmp_path / 'hw_costs.csv')
        assert rows[0] == CSV_COLUMNS
        ppac = [dict(zip(CSV_COLUMNS, r)) for r in rows[1:] if r[0] == 'ppac']
        assert [float(r['area_rounded_mm2']) for r in ppac] == [1.8, 3.0, 3.6, 5.8, 5.3, 8.7]
        assert [float(r['power_rounded_W']) for r in ppac] == [1.2, 2.0, 2.7, 4.4, 4.2, 6.9]
        assert (tmp_path / 'savings.csv').exists()
        assert read_csv(tmp_path / 'at_product.csv')[0] == \
            ['K_bits', 'L_bits', 'M_units', 'at_product_rel_cycles']

    def test_config_file_and_replay(self, tmp_path):
        options = tmp_path / 'opts.json'
        options.write_text(json.dumps({'target': [1e9, 2e9], 'K': [1], 'L': [7], 'arch': ['ppac']}))
        first, second = tmp_path / 'a', tmp_path / 'b'
        assert faeq.run(['hw', '--config', str(options), '--out-dir', str(first)]) == faeq.EXIT_OK
        assert len(read_csv(first / 'hw_costs.csv')) == 3
        assert faeq.run(['hw', '--config', str(first / MANIFEST_NAME),
                         '--out-dir', str(second)]) == faeq.EXIT_OK
        assert (first / 'hw_costs.csv').read_bytes() == (second / 'hw_costs.csv').read_bytes()

    def test_flag_overrides_config(self, tmp_path):
        options = tmp_path / 'opts.json'
        options.write_text(json.dumps({'K': [1, 2, 3], 'arch': ['ppac']}))
        assert faeq.run(['hw', '--config', str(options), '--K', '2', '--out-dir', str(tmp_path)]) == 0
        assert {r[1] for r in read_csv(tmp_path / 'hw_costs.csv')[1:]} == {'2'}

    def test_unknown_config_key(self, tmp_path):
        options = tmp_path / 'opts.json'
        options.write_text(json.dumps({'frequency': 1e9}))
        assert faeq.run(['hw', '--config', str(options), '--out-dir', str(tmp_path)]) == faeq.EXIT_RUNTIME

    def test_manifest_for_other_command(self, tmp_path, capsys):
        faeq.run(['design', '--B', '1', '--U', '1', '--channel', 'identity', '--out-dir', str(tmp_path)])
        code = faeq.run(['hw', '--config', str(tmp_path / MANIFEST_NAME), '--out-dir', str(tmp_path)])
        assert code == faeq.EXIT_RUNTIME

    def test_bad_calibration(self, tmp_path):
        broken = tmp_path / 'cal.json'
        broken.write_text('{"schema_version": 1}')
        code = faeq.run(['hw', '--calibration', str(broken), '--out-dir', str(tmp_path)])
        assert code == faeq.EXIT_RUNTIME

    def test_missing_point(self, tmp_path):
        code = faeq.run(['hw', '--K', '5', '--arch', 'ppac', '--out-dir', str(tmp_path)])
        assert code == faeq.EXIT_RUNTIME


class TestBer:
    def test_curves_and_consistency(self, tmp_path):
        code = faeq.run(['ber', '--B', '8', '--U', '2', '--constellation', 'QPSK',
                         '--method', 'lmmse', 'fame_fbs', '--K', '1', '--datapath', 'ppac',
                         '--snr', '0', '5', '--min-errors', '20', '--max-trials', '8',
                         '--vectors-per-trial', '10', '--threads', '1', '--consistency',
                         '--out-dir', str(tmp_path)])
        assert code == faeq.EXIT_OK
        manifest = read_json(tmp_path / MANIFEST_NAME)
        assert manifest['outputs'] == [
            'ber_fame_fbs_K1_ppac_L7.csv',
            'ber_lmmse.csv',
            'consistency_fame_fbs_K1_ppac_L7.csv',
        ]
        rows = read_csv(tmp_path / 'ber_lmmse.csv')
        assert rows[0] == ['snr_dB', 'trials', 'bit_errors', 'ber', 'stderr']
        assert len(rows) == 3

    def test_invalid_sweep(self, tmp_path):
        code = faeq.run(['ber', '--B', '2', '--U', '4', '--out-dir', str(tmp_path)])
        assert code == faeq.EXIT_RUNTIME

    def test_fbs_options(self, tmp_path):
        code = faeq.run(['ber', '--B', '8', '--U', '2', '--constellation', 'QPSK', '--method', 'fame_fbs',
                         '--snr', '5', '--min-errors', '5', '--max-trials', '8', '--vectors-per-trial', '10',
                         '--threads', '1', '--fbs-iters', '3', '--fbs-sweeps', '0', '--out-dir', str(tmp_path)])
        assert code == faeq.EXIT_OK
        config = read_json(tmp_path / MANIFEST_NAME)['config']
        assert config['fbs_iters'] == 3
        assert config['fbs_sweeps'] == 0
        assert faeq.run(['ber', '--B', '8', '--U', '2', '--fbs-phase-starts', '0',
                         '--out-dir', str(tmp_path / 'bad')]) == faeq.EXIT_RUNTIME


class TestUsage:
    def test_no_command(self, capsys):
        assert faeq.run([]) == faeq.EXIT_USAGE

    def test_unknown_command(self, capsys):
        assert faeq.run(['transmogrify']) == faeq.EXIT_USAGE

    def test_bad_choice(self, tmp_path, capsys):
        assert faeq.run(['design', '--method', 'zf', '--out-dir', str(tmp_path)]) == faeq.EXIT_USAGE

    def test_missing_required(self, tmp_path, capsys):
        assert faeq.run(['equalize', '--out-dir', str(tmp_path)]) == faeq.EXIT_USAGE


class TestSelftest:
    def test_single_check(self, tmp_path, capsys):
        code = faeq.run(['selftest', '--only', 'cycle_models', '--out-dir', str(tmp_path)])
        assert code == faeq.EXIT_OK
        out = capsys.readouterr().out
        assert '[PASS] cycle_models' in out
        results = read_json(tmp_path / 'selftest_results.json')
        assert results['summary'] == {'total': 1, 'passed': 1, 'failed': 0, 'quick': False, 'seed': 0}

    def test_ppac_cost_check(self, tmp_path, capsys):
        code = faeq.run(['selftest', '--only', 'ppac_cost_reproduction', '--out-dir', str(tmp_path)])
        assert code == faeq.EXIT_OK

    def test_unknown_check(self, tmp_path, capsys):
        code = faeq.run(['selftest', '--only', 'warp_drive', '--out-dir', str(tmp_path)])
        assert code == faeq.EXIT_RUNTIME

    def test_failing_check_exit_code(self, tmp_path, capsys):
        broken = tmp_path / 'cal.json'
        broken.write_text(json.dumps({'schema_version': 1, 'system': {'B': 256, 'U': 16}}))
        code = faeq.run(['selftest', '--only', 'ppac_cost_reproduction',
                         '--calibration', str(broken), '--out-dir', str(tmp_path)])
        assert code == faeq.EXIT_SELFTEST
