"""Property suites for the proven claims and scans for the conjectured ones."""

from .properties import REGISTRY, run_property_suite
from .properties import replay as replay_property
from .report import CheckResult, SuiteConfig, ViolationReport
from .scans import replay as replay_finding
from .scans import scan_conjectures

__all__ = [
    "REGISTRY",
    "CheckResult",
    "SuiteConfig",
    "ViolationReport",
    "replay_finding",
    "replay_property",
    "run_property_suite",
    "scan_conjectures",
]
