"""
Hardware Cost: Design-Space Exploration
Sweeps architectures, equalizer resolutions K and input resolutions L at one
or more throughput targets and tabulates system area and power.
"""

import csv
from dataclasses import dataclass, asdict
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from utils.errors import CalibrationError, ConfigError
from .calibration import CalibrationSet, InstanceCalibration
from .cost_model import (
    at_table,
    estimate_optimized_from_reference,
    optimize_M,
    replicate_mac_model,
    round_significant,
    system_cost,
)

ARCH_ORDER = ('mac_original', 'mac_optimized', 'ppac')

CSV_COLUMNS = [
    'arch', 'K_bits', 'L_bits', 'target_vectors_per_s', 'instances_count', 'M_units',
    'area_mm2', 'power_W', 'achieved_vectors_per_s', 'area_rounded_mm2', 'power_rounded_W',
    'source',
]


@dataclass
class CostRow:
    """One design point of the exploration."""
    arch: str
    K: int
    L: int
    target: float
    instances: Optional[int]
    M: Optional[int]
    area: float
    power: float
    achieved: Optional[float]
    source: str  # calibrated | reference | estimated

    @property
    def area_rounded(self) -> float:
        return round_significant(self.area, 2)

    @property
    def power_rounded(self) -> float:
        return round_significant(self.power, 2)

    def as_csv(self) -> List[str]:
        def fmt(x):
            return '' if x is None else format(x, '.12g') if isinstance(x, float) else str(x)
        return [
            self.arch, str(self.K), str(self.L), fmt(float(self.target)), fmt(self.instances),
            fmt(self.M), fmt(self.area), fmt(self.power), fmt(self.achieved),
            fmt(self.area_rounded), fmt(self.power_rounded), self.source,
        ]


class DesignSpaceExplorer:
    """Builds cost tables from a calibration set."""

    def __init__(self, calibration: CalibrationSet, M: Optional[int] = None):
        """
        Initialize explorer

        Args:
            calibration: Loaded calibration data
            M: MAC units per PE for the optimized array (None: AT-optimal per point)
        """
        self.calibration = calibration
        self.M = M if M is not None else calibration.M
        self.stats = {
            'points': 0,
            'calibrated': 0,
            'reference': 0,
            'estimated': 0,
        }

    def explore(
        self,
        targets: Sequence[float],
        K_list: Sequence[int],
        L_list: Sequence[int],
        archs: Optional[Sequence[str]] = None,
    ) -> List[CostRow]:
        """
        Cost every requested design point.

        Args:
            targets: Throughput targets in vectors/s
            K_list: Equalizer resolutions
            L_list: Input resolutions
            archs: Architectures to include; None means PPAC plus whichever MAC
                variants the calibration supports

        Returns:
            Rows ordered by (arch, K, L, target)
        """
        if not targets or not K_list or not L_list:
            raise ConfigError("targets, K list and L list must be nonempty")
        if archs is not None:
            unknown = set(archs) - set(ARCH_ORDER)
            if unknown:
                raise ConfigError(f"Unknown architectures: {', '.join(sorted(unknown))}")
        requested = list(archs) if archs is not None else list(ARCH_ORDER)
        strict = archs is not None

        rows = []
        for arch in ARCH_ORDER:
            if arch not in requested:
                continue
            for K in sorted(set(K_list)):
                for L in sorted(set(L_list)):
                    for target in sorted(set(targets)):
                        row = self._cost_point(arch, K, L, float(target), strict or arch == 'ppac')
                        if row is not None:
                            rows.append(row)
                            self.stats['points'] += 1
                            self.stats[row.source] += 1
        return rows

    def _cost_point(self, arch: str, K: int, L: int, target: float, strict: bool) -> Optional[CostRow]:
        cal = self.calibration
        if arch == 'ppac':
            inst = cal.instance('ppac', K, L)
            if inst is None:
                raise CalibrationError(f"No PPAC calibration for K={K}")
            return self._from_instance(arch, inst.with_latency(L), K, L, target, None)

        mac = cal.instance('mac', K, L)
        fr = cal.replication(K, L)
        if mac is not None:
            if arch == 'mac_original':
                return self._from_instance(arch, mac, K, L, target, 1)
            if fr is not None:
                M = self.M or optimize_M(cal.B, fr)
                return self._from_instance(arch, replicate_mac_model(mac, M, fr, cal.B), K, L, target, M)

        ref = cal.reference(K, L)
        if ref is not None and abs(ref.target - target) <= 1e-9 * target:
            if arch == 'mac_original':
                return CostRow(arch, K, L, target, None, 1, ref.original.area, ref.original.power,
                               None, 'reference')
            if fr is not None:
                M = self.M or optimize_M(cal.B, fr)
                est = estimate_optimized_from_reference(ref.original, M, fr, cal.B)
                return CostRow(arch, K, L, target, None, M, est.area, est.power, None, 'estimated')

        if strict:
            raise CalibrationError(f"Missing calibration for {arch} K={K} L={L} at {target:g} vectors/s")
        return None

    @staticmethod
    def _from_instance(arch: str, inst: InstanceCalibration, K: int, L: int, target: float,
                       M: Optional[int]) -> CostRow:
        report = system_cost(inst, target)
        return CostRow(arch, K, L, target, report.instances, M, report.total_area,
                       report.total_power, report.achieved_throughput, 'calibrated')

    def get_stats(self) -> Dict:
        """Get exploration statistics"""
        return self.stats.copy()

    def get_summary(self, rows: List[CostRow]) -> str:
        """Generate human-readable summary"""
        lines = ["Design-Space Exploration:"]
        lines.append(f"  Points costed: {self.stats['points']}")
        lines.append(f"  From instance calibration: {self.stats['calibrated']}")
        lines.append(f"  From system references: {self.stats['reference']}")
        lines.append(f"  Estimated from references: {self.stats['estimated']}")
        lines.append("")
        for row in rows:
            inst = f"{row.instances:3d} inst" if row.instances is not None else "   ref  "
            lines.append(
                f"  {row.arch:14s} K={row.K} L={row.L}  {inst}  "
                f"{row.area_rounded:6g} mm2  {row.power_rounded:6g} W  ({row.source})"
            )
        return "\n".join(lines)


def explore(calibration: CalibrationSet, targets: Sequence[float], K_list: Sequence[int],
            L_list: Sequence[int], archs: Optional[Sequence[str]] = None,
            M: Optional[int] = None) -> List[CostRow]:
    """Functional wrapper around DesignSpaceExplorer.explore."""
    return DesignSpaceExplorer(calibration, M=M).explore(targets, K_list, L_list, archs)


def savings_summary(rows: List[CostRow]) -> List[Dict[str, float]]:
    """Optimized-MAC over PPAC area and power ratios per (K, L, target)."""
    index = {(r.arch, r.K, r.L, r.target): r for r in rows}
    out = []
    for (arch, K, L, target), ppac in sorted(index.items(), key=lambda kv: kv[0][1:]):
        if arch != 'ppac':
            continue
        mac = index.get(('mac_optimized', K, L, target))
        if mac is None:
            continue
        out.append({
            'K_bits': K,
            'L_bits': L,
            'target_vectors_per_s': target,
            'area_ratio_x': mac.area / ppac.area,
            'power_ratio_x': mac.power / ppac.power,
        })
    return out


def write_cost_csv(rows: List[CostRow], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow(row.as_csv())
    return path


def write_dict_csv(records: List[Dict], columns: List[str], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(columns)
        for rec in records:
            writer.writerow([format(v, '.12g') if isinstance(v, float) else v for v in
                             (rec[c] for c in columns)])
    return path


def at_records(B: int, calibration: CalibrationSet) -> List[Dict]:
    """AT-product table for every replication-fraction entry."""
    records = []
    for (K, L), fr in sorted(calibration.fractions.items(), key=lambda kv: (kv[0][0], kv[0][1] or 0)):
        for M, at in at_table(B, fr):
            records.append({'K_bits': K, 'L_bits': L if L is not None else '', 'M_units': M,
                            'at_product_rel_cycles': at})
    return records
