"""
Hardware Cost
Area, power and throughput models, MAC replication scaling and design-space
exploration from per-instance calibration data.
"""

from .calibration import (
    InstanceCalibration,
    ReplicationFractions,
    SystemFigures,
    MacReference,
    CalibrationSet,
    parse_calibration,
    load_calibration,
)
from .cost_model import (
    CostReport,
    instance_throughput,
    instances_needed,
    system_cost,
    mac_latency,
    area_factor,
    replicate_mac_model,
    at_product,
    at_table,
    optimize_M,
    estimate_optimized_from_reference,
    backsolve_fractions,
    round_significant,
)
from .explorer import (
    ARCH_ORDER,
    CSV_COLUMNS,
    CostRow,
    DesignSpaceExplorer,
    explore,
    savings_summary,
    write_cost_csv,
    write_dict_csv,
    at_records,
)

__all__ = [
    'InstanceCalibration',
    'ReplicationFractions',
    'SystemFigures',
    'MacReference',
    'CalibrationSet',
    'parse_calibration',
    'load_calibration',
    'CostReport',
    'instance_throughput',
    'instances_needed',
    'system_cost',
    'mac_latency',
    'area_factor',
    'replicate_mac_model',
    'at_product',
    'at_table',
    'optimize_M',
    'estimate_optimized_from_reference',
    'backsolve_fractions',
    'round_significant',
    'ARCH_ORDER',
    'CSV_COLUMNS',
    'CostRow',
    'DesignSpaceExplorer',
    'explore',
    'savings_summary',
    'write_cost_csv',
    'write_dict_csv',
    'at_records',
]
