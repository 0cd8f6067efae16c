"""
Check results and reports shared by every verification suite.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Iterable


class CheckStatus(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INCONCLUSIVE = "INCONCLUSIVE"
    INFO = "INFO"


@dataclass
class CheckResult:
    name: str
    status: CheckStatus
    detail: str = ""
    worst_point: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status != CheckStatus.FAIL


@dataclass
class CheckReport:
    """Ordered check results of one suite; only FAIL entries make it fail."""

    suite: str
    results: list[CheckResult] = field(default_factory=list)
    duration_seconds: float = 0.0

    def add(self, result: CheckResult) -> CheckResult:
        self.results.append(result)
        return result

    def extend(self, results: Iterable[CheckResult]) -> None:
        self.results.extend(results)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def by_status(self, status: CheckStatus) -> list[CheckResult]:
        return [r for r in self.results if r.status == status]

    def counts(self) -> dict[str, int]:
        return {s.value: len(self.by_status(s)) for s in CheckStatus}

    def to_text(self) -> str:
        lines = [f"suite {self.suite}"]
        width = max((len(r.name) for r in self.results), default=0)
        for r in self.results:
            line = f"  {r.status.value:<12} {r.name:<{width}}"
            if r.detail:
                line += f"  {r.detail}"
            lines.append(line.rstrip())
            if r.status == CheckStatus.FAIL and r.worst_point:
                lines.append(f"  {'':<12} worst: {_format_point(r.worst_point)}")
        counts = self.counts()
        summary = ", ".join(f"{v} {k.lower()}" for k, v in counts.items() if v)
        lines.append(f"  {'OK' if self.passed else 'FAILED'}: {summary} ({self.duration_seconds:.2f}s)")
        return "\n".join(lines)

    def to_dict(self) -> dict[str, Any]:
        return _report_to_dict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, default=str)


def merge_reports(suite: str, reports: Iterable[CheckReport]) -> CheckReport:
    merged = CheckReport(suite=suite)
    for rep in reports:
        for r in rep.results:
            merged.add(CheckResult(f"{rep.suite}/{r.name}", r.status, r.detail, r.worst_point))
        merged.duration_seconds += rep.duration_seconds
    return merged


def _format_point(point: dict[str, Any]) -> str:
    return ", ".join(f"{k}={v:.9g}" if isinstance(v, float) else f"{k}={v}" for k, v in point.items())


def _clean(value: Any) -> Any:
    """JSON-friendly scalars: enums to strings, non-finite floats to strings."""
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if hasattr(value, "item") and callable(value.item):
        return _clean(value.item())
    return value


def _report_to_dict(report: CheckReport) -> dict[str, Any]:
    data = _clean(asdict(report))
    data["passed"] = report.passed
    data["counts"] = report.counts()
    return data
