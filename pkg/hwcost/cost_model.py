"""
Hardware Cost: Models
Instance throughput, time-interleaved replication to a throughput target,
MAC-unit replication scaling and AT-product optimization.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from bitsim import is_power_of_two, log2_exact
from utils.errors import ConfigError
from .calibration import InstanceCalibration, ReplicationFractions, SystemFigures


@dataclass(frozen=True)
class CostReport:
    """System cost of enough instances to meet a target throughput."""
    instances: int
    total_area: float
    total_power: float
    achieved_throughput: float


def instance_throughput(cal: InstanceCalibration) -> float:
    """Vectors per second of one instance: f_clk / latency."""
    return cal.f_clk / cal.latency_cycles


def instances_needed(cal: InstanceCalibration, target: float) -> int:
    """Smallest n with n * f_clk / latency >= target (exact rational arithmetic)."""
    if not target > 0:
        raise ConfigError(f"target must be positive, got {target}")
    ratio = Fraction(target) * cal.latency_cycles / Fraction(cal.f_clk)
    return max(1, math.ceil(ratio))


def system_cost(cal: InstanceCalibration, target: float) -> CostReport:
    """
    Replicate instances until the target throughput is met.

    Args:
        cal: Per-instance calibration
        target: Required vectors per second

    Returns:
        CostReport with area and power scaled by the instance count
    """
    n = instances_needed(cal, target)
    return CostReport(
        instances=n,
        total_area=n * cal.area,
        total_power=n * cal.power,
        achieved_throughput=n * instance_throughput(cal),
    )


def mac_latency(B: int, M: int) -> int:
    if not is_power_of_two(M) or M > B or B % M != 0:
        raise ConfigError(f"M={M} must be a power of two dividing B={B}")
    return B // M + log2_exact(M)


def area_factor(M: int, fraction: float) -> float:
    """(1 - f) + M f: the unreplicated share plus M copies of the MAC share."""
    return (1.0 - fraction) + M * fraction


def replicate_mac_model(base: InstanceCalibration, M: int, fr: ReplicationFractions,
                        B: int) -> InstanceCalibration:
    """
    Estimate an optimized MAC array with M MAC units per PE from the
    original (M = 1) array.
    """
    latency = mac_latency(B, M)
    return InstanceCalibration(
        arch=base.arch,
        K=base.K,
        area=base.area * area_factor(M, fr.a_mac),
        power=base.power * area_factor(M, fr.p_mac),
        f_clk=base.f_clk,
        latency_cycles=latency,
        L=base.L,
        verified=False,
    )


def at_product(M: int, B: int, a_mac: float) -> float:
    """Relative area times latency of an M-unit PE."""
    return area_factor(M, a_mac) * mac_latency(B, M)


def at_table(B: int, fr: ReplicationFractions) -> List[Tuple[int, float]]:
    """AT-product for every power-of-two M from 1 to B."""
    if not is_power_of_two(B):
        raise ConfigError(f"B must be a power of two, got {B}")
    return [(1 << i, at_product(1 << i, B, fr.a_mac)) for i in range(log2_exact(B) + 1)]


def optimize_M(B: int, fr: ReplicationFractions) -> int:
    """Power-of-two M minimizing the AT-product; ties go to the smaller M."""
    best_M, best_at = None, None
    for M, at in at_table(B, fr):
        if best_at is None or at < best_at:
            best_M, best_at = M, at
    return best_M


def estimate_optimized_from_reference(original: SystemFigures, M: int, fr: ReplicationFractions,
                                      B: int) -> SystemFigures:
    """
    System-level optimized-MAC estimate from original-MAC system figures.

    Per-instance cost grows by the area/power factors while the instance
    count shrinks with the latency ratio (B/M + log2 M) / B.
    """
    ratio = mac_latency(B, M) / B
    return SystemFigures(
        area=original.area * area_factor(M, fr.a_mac) * ratio,
        power=original.power * area_factor(M, fr.p_mac) * ratio,
    )


def backsolve_fractions(original: SystemFigures, optimized: SystemFigures, M: int,
                        B: int) -> ReplicationFractions:
    """Fractions that make estimate_optimized_from_reference hit `optimized`."""
    if M < 2:
        raise ConfigError("Back-solving needs M >= 2")
    ratio = mac_latency(B, M) / B

    def solve(orig: float, opt: float) -> float:
        return (opt / (orig * ratio) - 1.0) / (M - 1)

    return ReplicationFractions(
        a_mac=solve(original.area, optimized.area),
        p_mac=solve(original.power, optimized.power),
    )


def round_significant(x: float, digits: int = 2) -> float:
    """Round to a number of significant figures."""
    if x == 0 or not math.isfinite(x):
        return x
    return round(x, digits - 1 - int(math.floor(math.log10(abs(x)))))
