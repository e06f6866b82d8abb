"""
Command-line front end for finite-alphabet equalizer design, bit-exact
equalization, BER sweeps, hardware cost exploration and self-test.

    python faeq.py design --B 1 --U 1 --K 1 --method flmmse --channel identity
    python faeq.py hw --target 2e9
    python faeq.py ber --method lmmse fame_fbs --K 1 3 --snr -2 0 2
    python faeq.py selftest --quick
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from alphabet import quantize_input
from ber import (
    DATAPATHS,
    BerSimulator,
    SweepConfig,
    datapath_consistency,
    input_scale,
    write_curve_csv,
)
from bitsim import BetaMode, MacArrayConfig, mac_mvp, ppac_cycles, ppac_equalize, ppac_load
from fame import METHODS, FbsConfig, FiniteAlphabetEqualizer, design_equalizer
from hwcost import (
    DesignSpaceExplorer,
    at_records,
    load_calibration,
    savings_summary,
    write_cost_csv,
    write_dict_csv,
)
from selftest import AcceptanceSuite
from sysmodel import generate_rayleigh_channel, lmmse_solve, snr_db_to_n0
from utils import jsonio
from utils.errors import ConfigError, DimensionError, FaeqError
from utils.manifest import MANIFEST_NAME, TOOL_VERSION, RunManifest
from utils.settings import load_settings

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2
EXIT_SELFTEST = 3

# argparse destinations that are never part of a resolved configuration
_NOT_CONFIG = ('command', 'handler', 'config', 'verbose')


class UsageError(Exception):
    """Raised instead of argparse's own exit on bad arguments."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------

def load_channel(spec: str, B: Optional[int], U: Optional[int], seed: int) -> np.ndarray:
    """
    Resolve --channel: a JSON file, 'identity', or 'rayleigh' (seeded draw).

    Channel files hold {"B": .., "U": .., "H": row-major [re, im] matrix}.
    """
    if spec == 'identity':
        if B is None or U is None:
            raise ConfigError("identity channel needs --B and --U")
        return np.eye(B, U, dtype=complex)
    if spec == 'rayleigh':
        if B is None or U is None:
            raise ConfigError("rayleigh channel needs --B and --U")
        return generate_rayleigh_channel(B, U, seed)

    data = jsonio.load_json(spec)
    if not isinstance(data, dict):
        raise DimensionError(f"{spec}: expected a JSON object with key 'H'")
    H = jsonio.decode_matrix(data['H'])
    if H.shape != (data.get('B', H.shape[0]), data.get('U', H.shape[1])):
        raise DimensionError(f"{spec}: H has shape {H.shape}, header says B={data.get('B')} U={data.get('U')}")
    if (B is not None and B != H.shape[0]) or (U is not None and U != H.shape[1]):
        raise DimensionError(f"{spec}: channel is {H.shape[0]}x{H.shape[1]}, --B/--U say {B}x{U}")
    return H


def channel_to_dict(H: np.ndarray) -> Dict[str, Any]:
    return {'B': int(H.shape[0]), 'U': int(H.shape[1]), 'H': jsonio.encode_matrix(H)}


def load_samples(path: str, B: int) -> np.ndarray:
    """
    Read receive vectors: {"y": [[re, im], ...]} for one vector or
    {"y": [[[re, im], ...], ...]} for several. Returns a B x N block.
    """
    data = jsonio.load_json(path)
    if not isinstance(data, dict):
        raise DimensionError(f"{path}: expected a JSON object with key 'y'")
    y = data['y']
    if not isinstance(y, list) or not y:
        raise DimensionError(f"{path}: 'y' must be a nonempty list of [re, im] pairs or of vectors")
    if isinstance(y[0], list) and y[0] and isinstance(y[0][0], list):
        Y = jsonio.decode_matrix(y).T
    else:
        Y = jsonio.decode_vector(y)[:, None]
    if Y.shape[0] != B:
        raise DimensionError(f"{path}: vectors have length {Y.shape[0]}, equalizer expects B={B}")
    return Y


def resolve_n0(args) -> float:
    if args.snr_db is not None and args.n0 is not None:
        raise ConfigError("give either --n0 or --snr-db, not both")
    if args.snr_db is not None:
        return snr_db_to_n0(args.snr_db, args.es)
    return 0.0 if args.n0 is None else args.n0


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_design(args, out_dir: Path) -> List[Path]:
    N0 = resolve_n0(args)
    H = load_channel(args.channel, args.B, args.U, args.seed)
    if args.verbose:
        print(f"Step 1/2: Designing {args.method} equalizer (B={H.shape[0]}, U={H.shape[1]}, K={args.K})...")

    if args.method == 'lmmse':
        result = lmmse_solve(H, N0 / args.es)
        doc = {
            'method': 'lmmse',
            'B': int(H.shape[0]),
            'U': int(H.shape[1]),
            'Wh': jsonio.encode_matrix(result.Wh),
            'condition_number': result.condition,
        }
    else:
        fae = design_equalizer(args.method, H, args.es, N0, args.K, fbs_config_from_args(args))
        doc = fae.to_dict()
        doc['mse'] = fae.mse(H, args.es, N0)

    if args.verbose:
        print("Step 2/2: Writing equalizer...")
    path = jsonio.save_json(doc, out_dir / 'equalizer.json')
    channel = jsonio.save_json(channel_to_dict(H), out_dir / 'channel.json')
    print(jsonio.dumps(doc), end='')
    return [path, channel]


def cmd_equalize(args, out_dir: Path) -> List[Path]:
    fae = FiniteAlphabetEqualizer.from_dict(jsonio.load_json(args.equalizer))
    Y = load_samples(args.samples, fae.B)
    mode = BetaMode.parse(args.beta_mode)
    if args.verbose:
        print(f"Step 1/2: Equalizing {Y.shape[1]} vector(s) via {args.datapath} datapath...")

    doc: Dict[str, Any] = {'datapath': args.datapath, 'vectors': int(Y.shape[1])}
    if args.datapath == 'float':
        shat = fae.Vh @ Y
        doc['cycles_per_vector'] = None
    else:
        scale = args.scale if args.scale is not None else input_scale(Y, args.L, args.loading)
        y_re, y_im = quantize_input(Y, args.L, scale)
        if args.datapath == 'ppac':
            raw = ppac_equalize(ppac_load(fae), fae.beta, y_re, y_im, args.L, mode)
            report = ppac_cycles(args.L)
        else:
            raw, report = mac_mvp(fae, y_re, y_im, args.L, MacArrayConfig(args.M, fae.B, fae.U), mode)
        shat = scale * raw
        doc.update({
            'L': args.L,
            'scale': scale,
            'beta_mode': str(mode),
            'architecture': report.architecture,
            'cycles_per_vector': report.cycles,
            'total_cycles': report.cycles * int(Y.shape[1]),
        })
    doc['shat'] = [jsonio.encode_vector(col) for col in shat.T]

    if args.verbose:
        print("Step 2/2: Writing estimates...")
    path = jsonio.save_json(doc, out_dir / 'equalized.json')
    if args.verbose and doc['cycles_per_vector']:
        print(f"✅ {doc['cycles_per_vector']} cycles per vector ({doc['architecture']})")
    return [path]


def _curve_configs(args) -> List[SweepConfig]:
    configs = []
    for method in args.method:
        for K in ([1] if method == 'lmmse' else args.K):
            datapath = 'float' if method == 'lmmse' else args.datapath
            configs.append(SweepConfig(
                B=args.B, U=args.U, constellation=args.constellation, method=method, K=K,
                datapath=datapath, L=args.L, scale=args.scale, loading=args.loading, M=args.M,
                beta_mode=args.beta_mode, snr_points=list(args.snr), min_errors=args.min_errors,
                max_trials=args.max_trials, vectors_per_trial=args.vectors_per_trial,
                seed=args.seed, threads=args.threads, fbs_iters=args.fbs_iters, fbs_step=args.fbs_step,
                fbs_alternations=args.fbs_alternations, fbs_phase_starts=args.fbs_phase_starts,
                fbs_sweeps=args.fbs_sweeps,
            ))
    return configs


def cmd_ber(args, out_dir: Path) -> List[Path]:
    configs = _curve_configs(args)
    for cfg in configs:
        cfg.validate()
    simulator = BerSimulator(threads=args.threads)
    outputs = []
    for i, cfg in enumerate(configs, 1):
        if args.verbose:
            print(f"Step {i}/{len(configs)}: Simulating {cfg.label}...")
        curve = simulator.sweep(cfg)
        outputs.append(write_curve_csv(curve, out_dir / f"ber_{curve.label}.csv"))
        if args.verbose:
            for p in curve.points:
                print(f"   {p.snr_db:6.2f} dB  BER {p.ber:.3e} ({p.bit_errors} errors, {p.trials} trials)")

    if args.consistency:
        for cfg in configs:
            if cfg.datapath == 'float':
                continue
            report = datapath_consistency(cfg)
            records = [{
                'snr_dB': p.snr_db,
                'ber_float': p.float_point.ber,
                'ber_bitexact': p.exact_point.ber,
                'ber_delta': p.ber_delta,
                'delta_stderr': p.delta_stderr,
                'max_rel_deviation': p.max_rel_deviation,
            } for p in report.points]
            outputs.append(write_dict_csv(records, list(records[0]),
                                          out_dir / f"consistency_{cfg.label}.csv"))
            if args.verbose:
                print(report.get_summary())

    if args.verbose:
        print("\n" + simulator.get_summary())
    return outputs


def cmd_hw(args, out_dir: Path) -> List[Path]:
    calibration = load_calibration(args.calibration or load_settings().calibration)
    if args.verbose:
        print(f"Step 1/2: Exploring design space from {calibration.source}...")
    explorer = DesignSpaceExplorer(calibration, M=args.M)
    rows = explorer.explore(args.target, args.K, args.L, args.arch)

    if args.verbose:
        print("Step 2/2: Writing cost tables...")
    outputs = [write_cost_csv(rows, out_dir / 'hw_costs.csv')]
    savings = savings_summary(rows)
    if savings:
        outputs.append(write_dict_csv(savings, list(savings[0]), out_dir / 'savings.csv'))
    at = at_records(calibration.B, calibration)
    if at:
        outputs.append(write_dict_csv(at, list(at[0]), out_dir / 'at_product.csv'))
    if args.verbose:
        print("\n" + explorer.get_summary(rows))
    return outputs


def cmd_selftest(args, out_dir: Path) -> List[Path]:
    suite = AcceptanceSuite(quick=args.quick, seed=args.seed, calibration=args.calibration)

    def progress(result):
        if args.verbose:
            print(f"   {'✅' if result.passed else '❌'} {result.name} ({result.runtime:.1f}s)")

    suite.run_all(only=args.only, progress=progress)
    print(suite.get_summary())
    path = suite.save_results(out_dir)
    args.selftest_passed = suite.all_passed
    return [path]


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=0, help='Master random seed')
    common.add_argument('--out-dir', type=Path, default=None,
                        help='Output directory (default: FAEQ_OUT_DIR or ./output)')
    common.add_argument('--config', type=Path, default=None,
                        help='JSON file of option values (or a manifest.json to replay)')
    common.add_argument('--verbose', '-v', action='store_true', help='Verbose output')
    return common


def _fbs_options() -> argparse.ArgumentParser:
    fbs = argparse.ArgumentParser(add_help=False)
    fbs.add_argument('--fbs-iters', type=int, default=100, help='FAME-FBS iterations')
    fbs.add_argument('--fbs-step', type=float, default=None,
                     help='Fixed FAME-FBS step (default: 1/(2(Es lambda_max + N0)))')
    fbs.add_argument('--fbs-alternations', type=int, default=3, help='Projection alternations')
    fbs.add_argument('--fbs-phase-starts', type=int, default=8, help='Rotated FL-MMSE starting points')
    fbs.add_argument('--fbs-sweeps', type=int, default=20, help='Local-search sweeps (0 disables)')
    return fbs


def fbs_config_from_args(args) -> FbsConfig:
    cfg = FbsConfig(
        max_iters=args.fbs_iters,
        step_size_rule='inverse-lipschitz' if args.fbs_step is None else 'fixed',
        step_size=args.fbs_step,
        proj_alternations=args.fbs_alternations,
        phase_starts=args.fbs_phase_starts,
        local_sweeps=args.fbs_sweeps,
    )
    cfg.validate()
    return cfg


def build_parser() -> Dict[str, argparse.ArgumentParser]:
    """Top-level parser plus one subparser per command (key '' is the top level)."""
    common = _common()
    fbs = _fbs_options()
    parser = _Parser(prog='faeq.py', description="Finite-alphabet MU-MIMO equalizer toolkit")
    sub = parser.add_subparsers(dest='command', parser_class=_Parser)
    parsers: Dict[str, argparse.ArgumentParser] = {'': parser}

    p = sub.add_parser('design', parents=[common, fbs], help='Design an equalizer')
    p.add_argument('--channel', default='rayleigh',
                   help="Channel JSON file, 'identity' or 'rayleigh' (default)")
    p.add_argument('--B', type=int, default=None, help='BS antennas')
    p.add_argument('--U', type=int, default=None, help='Users')
    p.add_argument('--K', type=int, default=1, help='Alphabet resolution in bits')
    p.add_argument('--method', choices=METHODS, default='fame_fbs', help='Design method')
    p.add_argument('--es', type=float, default=1.0, help='Symbol energy Es')
    p.add_argument('--n0', type=float, default=None, help='Noise variance N0 (default 0)')
    p.add_argument('--snr-db', type=float, default=None, help='Es/N0 in dB instead of --n0')
    p.set_defaults(handler=cmd_design)
    parsers['design'] = p

    p = sub.add_parser('equalize', parents=[common], help='Apply an equalizer to sample vectors')
    p.add_argument('--equalizer', required=True, help='Equalizer JSON from `design`')
    p.add_argument('--samples', required=True, help='Receive vectors JSON')
    p.add_argument('--datapath', choices=DATAPATHS, default='float')
    p.add_argument('--L', type=int, default=7, help='Input word length')
    p.add_argument('--scale', type=float, default=None, help='Input quantizer step')
    p.add_argument('--loading', type=float, default=3.0, help='Quantizer loading factor')
    p.add_argument('--M', type=int, default=1, help='MAC units per PE')
    p.add_argument('--beta-mode', default='float', help="'float' or 'fixed(F)'")
    p.set_defaults(handler=cmd_equalize)
    parsers['equalize'] = p

    p = sub.add_parser('ber', parents=[common, fbs], help='Monte-Carlo BER sweep')
    p.add_argument('--B', type=int, default=32)
    p.add_argument('--U', type=int, default=4)
    p.add_argument('--constellation', default='16QAM')
    p.add_argument('--method', nargs='+', choices=METHODS, default=['lmmse', 'flmmse', 'fame_fbs'])
    p.add_argument('--K', type=int, nargs='+', default=[1])
    p.add_argument('--datapath', choices=DATAPATHS, default='float')
    p.add_argument('--L', type=int, default=7)
    p.add_argument('--scale', type=float, default=None)
    p.add_argument('--loading', type=float, default=3.0)
    p.add_argument('--M', type=int, default=1)
    p.add_argument('--beta-mode', default='float')
    p.add_argument('--snr', type=float, nargs='+', default=[-2.0, 0.0, 2.0, 4.0],
                   help='Es/N0 points in dB')
    p.add_argument('--min-errors', type=int, default=200)
    p.add_argument('--max-trials', type=int, default=1000)
    p.add_argument('--vectors-per-trial', type=int, default=100)
    p.add_argument('--threads', type=int, default=None, help='Worker cap (default: FAEQ_THREADS)')
    p.add_argument('--consistency', action='store_true',
                   help='Also compare bit-exact and float datapaths')
    p.set_defaults(handler=cmd_ber)
    parsers['ber'] = p

    p = sub.add_parser('hw', parents=[common], help='Hardware cost exploration')
    p.add_argument('--calibration', default=None, help='Calibration JSON (default: FAEQ_CALIBRATION)')
    p.add_argument('--target', type=float, nargs='+', default=[2e9], help='Vectors per second')
    p.add_argument('--K', type=int, nargs='+', default=[1, 2, 3])
    p.add_argument('--L', type=int, nargs='+', default=[4, 7])
    p.add_argument('--arch', nargs='+', choices=['mac_original', 'mac_optimized', 'ppac'], default=None)
    p.add_argument('--M', type=int, default=None, help='MAC units per PE (default: calibration)')
    p.set_defaults(handler=cmd_hw)
    parsers['hw'] = p

    p = sub.add_parser('selftest', parents=[common], help='Run the acceptance checks')
    p.add_argument('--quick', action='store_true', help='Reduced sample sizes')
    p.add_argument('--only', nargs='+', default=None, help='Run only the named checks')
    p.add_argument('--calibration', default=None)
    p.set_defaults(handler=cmd_selftest)
    parsers['selftest'] = p
    return parsers


def load_config_file(path: Path, command: str, parser: argparse.ArgumentParser) -> Dict[str, Any]:
    """Option values from a JSON object or a manifest; unknown keys are errors."""
    data = jsonio.load_json(path)
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    if {'command', 'config', 'tool_version'} <= set(data):
        if data['command'] != command:
            raise ConfigError(f"{path}: manifest is for '{data['command']}', not '{command}'")
        data = data['config']
    dests = {a.dest for a in parser._actions}
    values = {}
    for key, value in data.items():
        dest = key.lstrip('-').replace('-', '_')
        if dest not in dests or dest in _NOT_CONFIG:
            raise ConfigError(f"{path}: unknown option '{key}' for {command}")
        values[dest] = value
    return values


def resolved_config(args) -> Dict[str, Any]:
    config = {}
    for key, value in sorted(vars(args).items()):
        if key in _NOT_CONFIG or key == 'selftest_passed':
            continue
        config[key] = str(value) if isinstance(value, Path) else value
    return config


def run(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run one subcommand and write its manifest.

    Returns:
        Exit code: 0 ok, 1 usage, 2 runtime/config error, 3 selftest failure
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    parsers = build_parser()
    try:
        args = parsers[''].parse_args(argv)
        if not args.command:
            parsers[''].print_usage(sys.stderr)
            return EXIT_USAGE
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.config is not None:
            defaults = load_config_file(args.config, args.command, parsers[args.command])
            parsers[args.command].set_defaults(**defaults)
            args = parsers[''].parse_args(argv)

        out_dir = Path(args.out_dir) if args.out_dir else load_settings().out_dir
        out_dir.mkdir(parents=True, exist_ok=True)
        if args.verbose:
            print("\n" + "=" * 60)
            print(f"🚀 faeq {args.command} (v{TOOL_VERSION}, seed {args.seed})")
            print("=" * 60)

        outputs = args.handler(args, out_dir)
        manifest = RunManifest(
            command=args.command,
            config=resolved_config(args),
            seed=args.seed,
            outputs=sorted(p.name for p in outputs),
        )
        manifest.save(out_dir)
        if args.verbose:
            for p in outputs:
                print(f"📄 {p}")
            print(f"💾 Manifest saved to: {out_dir / MANIFEST_NAME}")
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except (FaeqError, OSError, KeyError, json.JSONDecodeError) as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return EXIT_RUNTIME

    if args.command == 'selftest' and not args.selftest_passed:
        return EXIT_SELFTEST
    return EXIT_OK


def main():
    """Main entry point."""
    try:
        sys.exit(run())
    except KeyboardInterrupt:
        print("\n\n👋 Interrupted by user")
        sys.exit(130)


if __name__ == "__main__":
    main()
