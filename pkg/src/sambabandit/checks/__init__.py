"""Numerical checks of the inequalities, drift and decay bounds behind SAMBA's regret guarantees."""

from .report import CheckReport, CheckResult, CheckStatus
from .suites import SUITES, run_suite

__all__ = ["CheckReport", "CheckResult", "CheckStatus", "SUITES", "run_suite"]
