"""
Datapath Emulation: Cycle Models
Steady-state per-vector latencies of the PPAC and MAC datapaths.
"""

from dataclasses import dataclass

from utils.errors import ConfigError


@dataclass(frozen=True)
class CycleReport:
    """Clock cycles for one matrix-vector product."""
    cycles: int
    architecture: str

    def __post_init__(self):
        if self.cycles < 1:
            raise ConfigError(f"cycles must be >= 1, got {self.cycles}")


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def log2_exact(n: int) -> int:
    if not is_power_of_two(n):
        raise ConfigError(f"{n} is not a power of two")
    return n.bit_length() - 1


def ppac_cycles(L: int) -> CycleReport:
    """One input bit-plane per cycle."""
    return CycleReport(cycles=L, architecture='ppac')


def mac_cycles(B: int, M: int) -> CycleReport:
    """B/M accumulation cycles plus a log2(M)-level adder tree."""
    if B % M != 0:
        raise ConfigError(f"M={M} does not divide B={B}")
    arch = 'mac_original' if M == 1 else 'mac_optimized'
    return CycleReport(cycles=B // M + log2_exact(M), architecture=arch)


# accumulators are numpy int64; keep a bit of headroom below 2^63
ACCUMULATOR_LIMIT = 1 << 62


def accumulator_bound(K: int, B: int, L: int) -> int:
    """Largest |entry| of X^T_R y_R: (2^K - 1) * 2B * 2^(L-1)."""
    return ((1 << K) - 1) * 2 * B * (1 << (L - 1))


def check_accumulator(K: int, B: int, L: int) -> None:
    """Raise ConfigError when (K, B, L) could overflow the int64 accumulators."""
    bound = accumulator_bound(K, B, L)
    if bound > ACCUMULATOR_LIMIT:
        raise ConfigError(
            f"K={K}, B={B}, L={L} needs accumulators up to {bound}, above the 2^62 limit"
        )
