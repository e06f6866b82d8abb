"""
Hardware Cost: Calibration Data
Per-instance implementation figures and system-level reference values,
loaded from a JSON calibration file (schema in docs/CALIBRATION.md).
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from utils import jsonio
from utils.errors import CalibrationError

ARCHS = ('ppac', 'mac')
SCHEMA_VERSION = 1


@dataclass(frozen=True)
class InstanceCalibration:
    """
    Figures for one placed-and-routed instance.

    Units: area in mm^2, power in W, f_clk in Hz, latency in cycles per
    matrix-vector product. `L` is the input resolution the figures were
    taken at (None if resolution-independent).
    """
    arch: str
    K: int
    area: float
    power: float
    f_clk: float
    latency_cycles: int
    L: Optional[int] = None
    verified: bool = True

    def __post_init__(self):
        if self.arch not in ARCHS:
            raise CalibrationError(f"Unknown architecture '{self.arch}'")
        for name in ('area', 'power', 'f_clk', 'latency_cycles', 'K'):
            if not getattr(self, name) > 0:
                raise CalibrationError(f"{self.arch} K={self.K}: {name} must be positive")

    def with_latency(self, latency_cycles: int) -> 'InstanceCalibration':
        return InstanceCalibration(
            arch=self.arch, K=self.K, area=self.area, power=self.power, f_clk=self.f_clk,
            latency_cycles=latency_cycles, L=self.L, verified=self.verified,
        )


@dataclass(frozen=True)
class ReplicationFractions:
    """Share of area and power taken by the MAC units of the original array."""
    a_mac: float
    p_mac: float

    def __post_init__(self):
        if not (0 < self.a_mac < 1 and 0 < self.p_mac < 1):
            raise CalibrationError(
                f"Fractions must lie in (0, 1), got a_mac={self.a_mac}, p_mac={self.p_mac}"
            )


@dataclass(frozen=True)
class SystemFigures:
    area: float
    power: float


@dataclass(frozen=True)
class MacReference:
    """System-level MAC-array figures at a throughput target."""
    K: int
    L: int
    target: float
    original: SystemFigures
    optimized: Optional[SystemFigures] = None
    verified: bool = False


@dataclass
class CalibrationSet:
    """Everything a calibration file provides."""
    B: int
    U: int
    instances: List[InstanceCalibration] = field(default_factory=list)
    references: List[MacReference] = field(default_factory=list)
    fractions: Dict[tuple, ReplicationFractions] = field(default_factory=dict)
    M: Optional[int] = None
    source: str = ""

    def instance(self, arch: str, K: int, L: Optional[int] = None) -> Optional[InstanceCalibration]:
        """Exact (arch, K, L) match first, then an entry for any L."""
        candidates = [c for c in self.instances if c.arch == arch and c.K == K]
        for c in candidates:
            if L is not None and c.L == L:
                return c
        if arch == 'ppac' and candidates:
            return candidates[0]
        for c in candidates:
            if c.L is None:
                return c
        return None

    def reference(self, K: int, L: int) -> Optional[MacReference]:
        for ref in self.references:
            if ref.K == K and ref.L == L:
                return ref
        return None

    def replication(self, K: int, L: int) -> Optional[ReplicationFractions]:
        return self.fractions.get((K, L)) or self.fractions.get((K, None))


def _require(entry: Dict[str, Any], key: str, where: str) -> Any:
    if key not in entry:
        raise CalibrationError(f"{where}: missing field '{key}'")
    return entry[key]


def _figures(entry: Dict[str, Any], where: str) -> SystemFigures:
    return SystemFigures(
        area=float(_require(entry, 'area_mm2', where)),
        power=float(_require(entry, 'power_W', where)),
    )


def parse_calibration(data: Dict[str, Any], source: str = "") -> CalibrationSet:
    """Validate and convert a decoded calibration document."""
    if not isinstance(data, dict):
        raise CalibrationError("Calibration document must be a JSON object")
    version = data.get('schema_version', SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise CalibrationError(f"Unsupported schema_version {version}")
    system = _require(data, 'system', 'calibration')
    cal = CalibrationSet(B=int(_require(system, 'B', 'system')),
                         U=int(_require(system, 'U', 'system')), source=source)

    for i, entry in enumerate(data.get('instances', [])):
        where = f"instances[{i}]"
        cal.instances.append(InstanceCalibration(
            arch=_require(entry, 'arch', where),
            K=int(_require(entry, 'K', where)),
            area=float(_require(entry, 'area_mm2', where)),
            power=float(_require(entry, 'power_W', where)),
            f_clk=float(_require(entry, 'f_clk_Hz', where)),
            latency_cycles=int(_require(entry, 'latency_cycles', where)),
            L=entry.get('L'),
            verified=bool(entry.get('verified', True)),
        ))

    for i, entry in enumerate(data.get('mac_references', [])):
        where = f"mac_references[{i}]"
        optimized = entry.get('optimized')
        cal.references.append(MacReference(
            K=int(_require(entry, 'K', where)),
            L=int(_require(entry, 'L', where)),
            target=float(_require(entry, 'target_vectors_per_s', where)),
            original=_figures(_require(entry, 'original', where), where + '.original'),
            optimized=_figures(optimized, where + '.optimized') if optimized else None,
            verified=bool(entry.get('verified', False)),
        ))

    replication = data.get('replication', {})
    if replication.get('M') is not None:
        cal.M = int(replication['M'])
    for i, entry in enumerate(replication.get('fractions', [])):
        where = f"replication.fractions[{i}]"
        key = (int(_require(entry, 'K', where)), entry.get('L'))
        cal.fractions[key] = ReplicationFractions(
            a_mac=float(_require(entry, 'a_mac', where)),
            p_mac=float(_require(entry, 'p_mac', where)),
        )
    return cal


def load_calibration(path: Union[str, Path]) -> CalibrationSet:
    """Read a calibration JSON file."""
    path = Path(path)
    if not path.exists():
        raise CalibrationError(f"Calibration file not found: {path}")
    try:
        data = jsonio.load_json(path)
    except ValueError as exc:
        raise CalibrationError(f"{path}: invalid JSON ({exc})") from exc
    return parse_calibration(data, source=str(path))
