"""
Self-Test: Acceptance Suite
End-to-end checks of the cost model, the bit-exact datapaths, the design
solvers and the Monte-Carlo harness. `quick` shrinks every sample size.
"""

import math
import time
from dataclasses import dataclass, asdict
from functools import partial
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np
from scipy.optimize import minimize_scalar

from alphabet import alphabet_values
from ber import SweepConfig, ber_sweep, datapath_consistency, find_operating_point
from bitsim import (
    MacArrayConfig,
    integer_mvp_oracle,
    mac_cycles,
    mac_mvp,
    ppac_cycles,
    ppac_equalize,
    ppac_load,
    ppac_mvp,
)
from fame import (
    FiniteAlphabetEqualizer,
    exhaustive_fame_oracle,
    fame_fbs_design,
    fbs_gradient,
    optimal_beta,
)
from hwcost import ReplicationFractions, explore, load_calibration, optimize_M
from sysmodel import (
    generate_rayleigh_channel,
    get_constellation,
    lmmse_equalizer,
    mse_closed_form,
    mse_monte_carlo,
)
from utils import jsonio
from utils.errors import ConfigError
from utils.settings import load_settings

# PPAC system cost at 2 G vectors/s, rounded: (K, L) -> (area mm2, power W)
PPAC_REFERENCE_COSTS = {
    (1, 4): (1.8, 1.2), (2, 4): (3.6, 2.7), (3, 4): (5.3, 4.2),
    (1, 7): (3.0, 2.0), (2, 7): (5.8, 4.4), (3, 7): (8.7, 6.9),
}
REFERENCE_TARGET = 2e9


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    runtime: float


def _random_equalizer(rng: np.random.Generator, B: int, U: int, K: int) -> FiniteAlphabetEqualizer:
    values = np.array(alphabet_values(K).values)
    Xh = rng.choice(values, size=(U, B)) + 1j * rng.choice(values, size=(U, B))
    beta = rng.standard_normal(U) + 1j * rng.standard_normal(U)
    return FiniteAlphabetEqualizer(Xh=Xh, beta=beta, K=K, method='random')


def _ue_objective(v: np.ndarray, H: np.ndarray, Es: float, N0: float, u: int) -> float:
    e = H.conj().T @ v
    e[u] -= 1.0
    return float(Es * np.vdot(e, e).real + N0 * np.vdot(v, v).real)


def _beta_objective(x, H, Es, N0, u, direction, t) -> float:
    return _ue_objective(t * direction * x, H, Es, N0, u)


class AcceptanceSuite:
    """Runs the acceptance checks and records their outcome."""

    def __init__(self, quick: bool = False, seed: int = 0,
                 calibration: Optional[Union[str, Path]] = None):
        """
        Initialize suite

        Args:
            quick: Reduced sample sizes for a fast smoke run
            seed: Master seed for every random draw
            calibration: Calibration file (default: FAEQ_CALIBRATION)
        """
        self.quick = quick
        self.seed = seed
        self.calibration = Path(calibration) if calibration else load_settings().calibration
        self.results: List[CheckResult] = []

    @property
    def passed(self) -> int:
        return sum(1 for r in self.results if r.passed)

    @property
    def failed(self) -> int:
        return len(self.results) - self.passed

    @property
    def all_passed(self) -> bool:
        return bool(self.results) and self.failed == 0

    def checks(self) -> List[Tuple[str, Callable[[], Tuple[bool, str]]]]:
        return [
            ('ppac_cost_reproduction', self.check_ppac_costs),
            ('bit_exact_equivalence', self.check_bit_exact),
            ('cycle_models', self.check_cycle_models),
            ('solver_correctness', self.check_solvers),
            ('ber_ordering', self.check_ber_ordering),
            ('implementation_loss', self.check_implementation_loss),
            ('mse_statistical_consistency', self.check_mse_consistency),
        ]

    def run_all(self, only: Optional[List[str]] = None,
                progress: Optional[Callable[[CheckResult], None]] = None) -> List[CheckResult]:
        """
        Run every check (or the named subset).

        Exceptions inside a check are recorded as failures.
        """
        known = [name for name, _ in self.checks()]
        unknown = sorted(set(only or []) - set(known))
        if unknown:
            raise ConfigError(f"Unknown checks: {', '.join(unknown)} (choose from {', '.join(known)})")
        self.results = []
        for name, check in self.checks():
            if only and name not in only:
                continue
            start = time.perf_counter()
            try:
                ok, detail = check()
            except Exception as e:
                ok, detail = False, f"{type(e).__name__}: {e}"
            result = CheckResult(name=name, passed=ok, detail=detail,
                                 runtime=time.perf_counter() - start)
            self.results.append(result)
            if progress is not None:
                progress(result)
        return self.results

    # -- individual checks -------------------------------------------------

    def check_ppac_costs(self) -> Tuple[bool, str]:
        cal = load_calibration(self.calibration)
        rows = explore(cal, [REFERENCE_TARGET], [1, 2, 3], [4, 7], archs=['ppac'])
        mismatches = []
        for row in rows:
            area, power = PPAC_REFERENCE_COSTS[(row.K, row.L)]
            if abs(row.area_rounded - area) > 0.05 or abs(row.power_rounded - power) > 0.05:
                mismatches.append(f"K={row.K} L={row.L}: {row.area_rounded} mm2, {row.power_rounded} W")
        k1l7 = next(r for r in rows if r.K == 1 and r.L == 7)
        if k1l7.instances != 18:
            mismatches.append(f"K=1 L=7 needs {k1l7.instances} instances, expected 18")
        if len(rows) != len(PPAC_REFERENCE_COSTS):
            mismatches.append(f"{len(rows)} rows, expected {len(PPAC_REFERENCE_COSTS)}")
        if mismatches:
            return False, "; ".join(mismatches)
        return True, f"{2 * len(rows)} values match, 18 instances for K=1 L=7"

    def check_bit_exact(self) -> Tuple[bool, str]:
        rng = np.random.default_rng([self.seed, 2])
        n = 500 if self.quick else 10_000
        for i in range(n):
            B = int(rng.choice([8, 32, 64]))
            U = int(rng.choice([2, 4]))
            K = int(rng.integers(1, 4))
            L = int(rng.choice([4, 7]))
            fae = _random_equalizer(rng, B, U, K)
            lo, hi = -(1 << (L - 1)), 1 << (L - 1)
            y_re = rng.integers(lo, hi, size=B)
            y_im = rng.integers(lo, hi, size=B)

            arr = ppac_load(fae)
            got = ppac_mvp(arr, y_re, y_im, L).tolist()
            if got != integer_mvp_oracle(fae.Xh, y_re, y_im):
                return False, f"ppac_mvp differs from the integer oracle at sample {i} (B={B} U={U} K={K} L={L})"

            M = int(2 ** rng.integers(0, int(math.log2(B)) + 1))
            mac, _ = mac_mvp(fae, y_re, y_im, L, MacArrayConfig(M, B, U))
            ppac = ppac_equalize(arr, fae.beta, y_re, y_im, L)
            if not np.array_equal(mac, ppac):
                return False, f"mac_mvp (M={M}) differs from ppac_equalize at sample {i}"
        return True, f"{n} random instances bit-identical"

    def check_cycle_models(self) -> Tuple[bool, str]:
        problems = []
        for L in range(2, 17):
            if ppac_cycles(L).cycles != L:
                problems.append(f"ppac_cycles({L})")
        if mac_cycles(256, 16).cycles != 20:
            problems.append("mac_cycles(256, 16) != 20")
        if mac_cycles(256, 1).cycles != 256:
            problems.append("mac_cycles(256, 1) != 256")
        M = optimize_M(256, ReplicationFractions(a_mac=0.2, p_mac=0.5))
        if M != 16:
            problems.append(f"optimize_M(256, a_mac=0.2) = {M}")
        return (not problems), "; ".join(problems) or "PPAC L cycles, MAC B/M + log2 M, M*=16"

    def check_solvers(self) -> Tuple[bool, str]:
        rng = np.random.default_rng([self.seed, 4])
        n = 20 if self.quick else 100
        Es = 1.0
        worst_grad, worst_beta = 0.0, 0.0
        h = 1e-6
        for _ in range(n):
            B = int(rng.integers(2, 17))
            U = int(rng.integers(1, B + 1))
            H = generate_rayleigh_channel(B, U, rng)
            N0 = float(10 ** rng.uniform(-2, 0))
            u = int(rng.integers(U))
            v = rng.standard_normal(B) + 1j * rng.standard_normal(B)

            g = fbs_gradient(v, H, Es, N0, u)
            g_num = np.zeros(B, dtype=complex)
            for b in range(B):
                for unit in (1.0, 1j):
                    d = np.zeros(B, dtype=complex)
                    d[b] = h * unit
                    slope = (_ue_objective(v + d, H, Es, N0, u) - _ue_objective(v - d, H, Es, N0, u)) / (2 * h)
                    g_num[b] += slope * unit
            worst_grad = max(worst_grad, float(np.linalg.norm(g_num - g) / np.linalg.norm(g)))

            # the objective is separable in Re(beta) and Im(beta)
            values = np.array(alphabet_values(2).values)
            x = rng.choice(values, size=B) + 1j * rng.choice(values, size=B)
            beta = optimal_beta(x, H, Es, N0, u)
            re = minimize_scalar(partial(_beta_objective, x, H, Es, N0, u, 1.0),
                                 method='brent', options={'xtol': 1e-14}).x
            im = minimize_scalar(partial(_beta_objective, x, H, Es, N0, u, 1j),
                                 method='brent', options={'xtol': 1e-14}).x
            worst_beta = max(worst_beta, abs(complex(re, im) - beta) / max(1.0, abs(beta)))

        rng = np.random.default_rng([self.seed, 5])
        seeds = 20 if self.quick else 100
        below, close = 0, 0
        for _ in range(seeds):
            H = generate_rayleigh_channel(3, 2, rng)
            N0 = 0.1
            fbs = fame_fbs_design(H, Es, N0, 1).mse(H, Es, N0)
            best = exhaustive_fame_oracle(H, Es, N0, 1).mse(H, Es, N0)
            if fbs < best * (1 - 1e-9):
                below += 1
            if fbs <= 1.1 * best:
                close += 1

        ok = worst_grad <= 1e-5 and worst_beta <= 1e-8 and below == 0 and close >= 0.8 * seeds
        detail = (f"gradient rel. err {worst_grad:.1e}, beta err {worst_beta:.1e}, "
                  f"FBS within 10% of oracle on {close}/{seeds}, below oracle on {below}")
        return ok, detail

    def _ordering_config(self, **overrides) -> SweepConfig:
        base = dict(B=32, U=4, constellation='16QAM', seed=self.seed,
                    min_errors=300 if self.quick else 2000,
                    max_trials=400 if self.quick else 4000,
                    vectors_per_trial=100)
        base.update(overrides)
        return SweepConfig(**base)

    def _operating_point(self) -> Tuple[float, float, float]:
        grid = [-2.0, 0.0, 2.0] if self.quick else [-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]
        snr, curve = find_operating_point(self._ordering_config(method='lmmse'), 1e-2, grid)
        ref = curve.point(snr)
        return snr, ref.ber, ref.stderr

    def check_ber_ordering(self) -> Tuple[bool, str]:
        snr, lmmse_ber, _ = self._operating_point()
        curves = {}
        for method in ('flmmse', 'fame_fbs'):
            for K in (1, 3):
                cfg = self._ordering_config(method=method, K=K, snr_points=[snr])
                curves[(method, K)] = ber_sweep(cfg).points[0]

        fl1, fb1 = curves[('flmmse', 1)], curves[('fame_fbs', 1)]
        fl3, fb3 = curves[('flmmse', 3)], curves[('fame_fbs', 3)]
        gap1 = fl1.ber - fb1.ber
        sep1 = 3 * math.hypot(fl1.stderr, fb1.stderr)
        # 3-bit FAME-FBS may not trail 3-bit FL-MMSE by more than the noise
        gap3 = fb3.ber - fl3.ber
        sep3 = 3 * math.hypot(fl3.stderr, fb3.stderr)
        ok = gap1 > sep1 and gap3 <= sep3 and fb3.ber <= 1.5 * lmmse_ber
        detail = (f"{snr:g} dB: L-MMSE {lmmse_ber:.2e}, 1-bit FL-MMSE {fl1.ber:.2e} vs "
                  f"FAME-FBS {fb1.ber:.2e}; 3-bit FL-MMSE {fl3.ber:.2e} vs FAME-FBS {fb3.ber:.2e}")
        return ok, detail

    def check_implementation_loss(self) -> Tuple[bool, str]:
        snr, _, _ = self._operating_point()
        parts, ok = [], True
        for K in ((1,) if self.quick else (1, 3)):
            cfg = self._ordering_config(method='fame_fbs', K=K, datapath='ppac', L=7,
                                        snr_points=[snr])
            report = datapath_consistency(cfg)
            ok = ok and report.within_noise(3.0)
            p = report.points[0]
            parts.append(f"K={K}: float {p.float_point.ber:.2e}, PPAC L=7 {p.exact_point.ber:.2e}")
        return ok, f"{snr:g} dB; " + "; ".join(parts)

    def check_mse_consistency(self) -> Tuple[bool, str]:
        rng = np.random.default_rng([self.seed, 7])
        const = get_constellation('QPSK')
        trials = 5_000 if self.quick else 20_000
        worst = 0.0
        for _ in range(20):
            B = int(rng.integers(2, 17))
            U = int(rng.integers(1, B + 1))
            H = generate_rayleigh_channel(B, U, rng)
            Es = float(rng.uniform(0.5, 2.0))
            N0 = float(10 ** rng.uniform(-2, 0))
            Wh = lmmse_equalizer(H, N0 / Es)
            Wh = Wh + 0.1 * (rng.standard_normal(Wh.shape) + 1j * rng.standard_normal(Wh.shape))
            exact = mse_closed_form(Wh, H, Es, N0)
            est, se = mse_monte_carlo(Wh, H, Es, N0, const, trials, seed=rng, return_stderr=True)
            worst = max(worst, abs(est - exact) / se)
        return worst <= 3.0, f"largest deviation {worst:.2f} standard errors over 20 configurations"

    # -- reporting ---------------------------------------------------------

    def get_summary(self) -> str:
        """Generate human-readable summary"""
        total = len(self.results)
        rate = (self.passed / total * 100) if total else 0.0
        lines = ["=" * 80, "📊 SELF-TEST SUMMARY", "=" * 80, ""]
        for r in self.results:
            mark = "[PASS]" if r.passed else "[FAIL]"
            lines.append(f"{mark} {r.name} ({r.runtime:.1f}s): {r.detail}")
        lines.append("")
        lines.append(f"Total Checks: {total}")
        lines.append(f"[+] Passed: {self.passed}")
        lines.append(f"[-] Failed: {self.failed}")
        lines.append(f"[*] Pass Rate: {rate:.1f}%")
        return "\n".join(lines)

    def to_dict(self) -> Dict:
        return {
            'summary': {
                'total': len(self.results),
                'passed': self.passed,
                'failed': self.failed,
                'quick': self.quick,
                'seed': self.seed,
            },
            'checks': [asdict(r) for r in self.results],
        }

    def save_results(self, out_dir: Union[str, Path]) -> Path:
        """Write selftest_results.json (runtimes excluded for stable bytes)."""
        data = self.to_dict()
        for check in data['checks']:
            check.pop('runtime')
        return jsonio.save_json(data, Path(out_dir) / 'selftest_results.json')
