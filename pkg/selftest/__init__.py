"""
Self-Test
Acceptance checks run by `faeq.py selftest`.
"""

from .acceptance import PPAC_REFERENCE_COSTS, REFERENCE_TARGET, CheckResult, AcceptanceSuite

__all__ = [
    'PPAC_REFERENCE_COSTS',
    'REFERENCE_TARGET',
    'CheckResult',
    'AcceptanceSuite',
]
