"""Exact verification of quantum vector-field identities on q-deformed planes."""

from .checks import CheckResult
from .harness import Report, SuiteOptions, UnsupportedGroup, oracle_verify, run_suite
from .qring import PoleAtPoint, QField
from .qspaces import AlgebraSpec, build_algebra, derived_element
from .rtensor import UnsupportedDimension

__all__ = [
    "AlgebraSpec",
    "CheckResult",
    "PoleAtPoint",
    "QField",
    "Report",
    "SuiteOptions",
    "UnsupportedDimension",
    "UnsupportedGroup",
    "build_algebra",
    "derived_element",
    "oracle_verify",
    "run_suite",
]
