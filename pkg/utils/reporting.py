"""
Report collection for the verification harness: JSON-lines streaming through
callbacks, per-family aggregation and a summary document.
"""

import json
import logging
import math
from typing import Callable, Dict, Iterable, List, Optional, TextIO

import numpy as np

from core.entities import Report, ReportStatus

logger = logging.getLogger(__name__)


def to_jsonable(value):
    """numpy scalars to Python, non-finite floats to None"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def report_to_json(report: Report, include_timing: bool = False) -> str:
    return json.dumps(to_jsonable(report.to_dict(include_timing)), sort_keys=True)


def aggregate_reports(check: str, reports: Iterable[Report], params: Optional[dict] = None) -> Report:
    """
    One report for a family of cases: the largest residual, error if any case
    errored, fail if any case failed.
    """
    reports = list(reports)
    if not reports:
        raise ValueError(f"No cases to aggregate for '{check}'")
    merged = dict(params or {})
    merged['cases'] = len(reports)
    residual = max(r.max_residual for r in reports)
    tolerance = reports[0].tolerance
    wall_time = sum(r.wall_time for r in reports)

    errors = [r for r in reports if r.status is ReportStatus.ERROR]
    if errors:
        return Report(check, ReportStatus.ERROR, float('inf'), tolerance, merged, wall_time,
                      message=errors[0].message)
    failed = [r for r in reports if r.status is ReportStatus.FAIL]
    status = ReportStatus.FAIL if failed else ReportStatus.PASS
    if failed:
        merged['first_failure'] = failed[0].params
    return Report(check, status, residual, tolerance, merged, wall_time)


def json_line_writer(stream: TextIO, include_timing: bool = False) -> Callable[[Report], None]:
    def write(report: Report):
        stream.write(report_to_json(report, include_timing) + "\n")
        stream.flush()
    return write


class ReportTracker:
    """Track verification reports and stream them to registered callbacks"""

    def __init__(self, include_timing: bool = False):
        """
        Args:
            include_timing: Keep wall times in exported documents
        """
        self.include_timing = include_timing
        self.callbacks: List[Callable[[Report], None]] = []
        self.reports: List[Report] = []
        self.status_counts: Dict[str, int] = {s.value: 0 for s in ReportStatus}

    def register_callback(self, callback: Callable[[Report], None]):
        """Register callback for report streaming"""
        self.callbacks.append(callback)

    def _emit(self, report: Report):
        for callback in self.callbacks:
            try:
                callback(report)
            except Exception as e:
                logger.warning("⚠ Report callback failed: %s", e)

    def record(self, report: Report):
        self.reports.append(report)
        self.status_counts[report.status.value] += 1
        level = logging.DEBUG if report.passed else logging.INFO
        logger.log(level, "  %s %s  max residual %.3e  (tol %.0e)",
                   "✓" if report.passed else "✗", report.check, report.max_residual, report.tolerance)
        if report.message:
            logger.log(level, "      %s", report.message)
        self._emit(report)

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def get_summary(self) -> dict:
        per_check: Dict[str, dict] = {}
        for r in self.reports:
            entry = per_check.setdefault(r.check, {'reports': 0, 'passed': 0, 'max_residual': 0.0})
            entry['reports'] += 1
            entry['passed'] += int(r.passed)
            entry['max_residual'] = max(entry['max_residual'], r.max_residual)
        summary = {
            'total': len(self.reports),
            'status': dict(self.status_counts),
            'all_passed': self.all_passed,
            'checks': per_check,
        }
        if self.include_timing:
            summary['wall_time'] = round(sum(r.wall_time for r in self.reports), 6)
        return summary

    def export_to_json(self, filename: str):
        """Write the summary and every report to a JSON document"""
        document = {
            'summary': self.get_summary(),
            'reports': [r.to_dict(self.include_timing) for r in self.reports],
        }
        with open(filename, 'w', encoding='utf-8') as f:
            json.dump(to_jsonable(document), f, indent=2, sort_keys=True)
