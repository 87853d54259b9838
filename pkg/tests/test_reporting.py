"""Tests for reports, aggregation and the report tracker."""

import io
import json
import logging

import numpy as np
import pytest

from core.entities import Report, ReportStatus
from utils.reporting import (ReportTracker, aggregate_reports, json_line_writer,
                             report_to_json, to_jsonable)


def passing(check='swap', residual=1e-14, **params):
    return Report.from_residual(check, residual, 1e-12, params, wall_time=0.5)


class TestReport:
    def test_status_from_residual(self):
        assert passing().status is ReportStatus.PASS
        assert Report.from_residual('eq3', 1e-11, 1e-12).status is ReportStatus.FAIL

    def test_nan_fails(self):
        assert not Report.from_residual('eq3', float('nan'), 1e-12).passed

    def test_from_error(self):
        report = Report.from_error('eq1', ValueError("bad"), 1e-10, {'n': 3})
        assert report.status is ReportStatus.ERROR
        assert report.message == "ValueError: bad"
        assert report.to_dict()['max_residual'] is None

    def test_timing_only_on_request(self):
        assert 'wall_time' not in passing().to_dict()
        assert passing().to_dict(include_timing=True)['wall_time'] == 0.5


def test_to_jsonable():
    data = {'a': np.float64(0.25), 'b': (1, np.int64(2)), 'c': float('inf'), 3: [np.bool_(True)]}
    assert to_jsonable(data) == {'a': 0.25, 'b': [1, 2], 'c': None, '3': [True]}


def test_report_json_is_sorted_and_stable():
    line = report_to_json(passing(n=np.int64(4)))
    assert json.loads(line) == {'check': 'swap', 'status': 'pass', 'max_residual': 1e-14,
                                'tolerance': 1e-12, 'params': {'n': 4}}
    assert line == report_to_json(passing(n=4))


class TestAggregate:
    def test_all_pass(self):
        family = aggregate_reports('swap', [passing(residual=1e-15), passing(residual=1e-13)], {'n': 4})
        assert family.passed
        assert family.max_residual == 1e-13
        assert family.params == {'n': 4, 'cases': 2}
        assert family.wall_time == 1.0

    def test_failure_names_first_failing_case(self):
        family = aggregate_reports('swap', [passing(m=0), passing(residual=1.0, m=1), passing(residual=2.0, m=2)])
        assert family.status is ReportStatus.FAIL
        assert family.params['first_failure'] == {'m': 1}

    def test_error_dominates(self):
        error = Report.from_error('swap', RuntimeError("boom"), 1e-12)
        family = aggregate_reports('swap', [passing(residual=1.0), error])
        assert family.status is ReportStatus.ERROR
        assert "boom" in family.message

    def test_empty(self):
        with pytest.raises(ValueError):
            aggregate_reports('swap', [])


class TestTracker:
    def test_streams_json_lines(self):
        stream = io.StringIO()
        tracker = ReportTracker()
        tracker.register_callback(json_line_writer(stream))
        tracker.record(passing())
        tracker.record(passing('eq3', residual=1.0))
        lines = stream.getvalue().splitlines()
        assert [json.loads(line)['status'] for line in lines] == ['pass', 'fail']
        assert not tracker.all_passed

    def test_summary(self):
        tracker = ReportTracker()
        tracker.record(passing())
        tracker.record(passing(residual=1e-13))
        summary = tracker.get_summary()
        assert summary['total'] == 2
        assert summary['status'] == {'pass': 2, 'fail': 0, 'error': 0}
        assert summary['checks']['swap'] == {'reports': 2, 'passed': 2, 'max_residual': 1e-13}
        assert 'wall_time' not in summary

    def test_summary_with_timing(self):
        tracker = ReportTracker(include_timing=True)
        tracker.record(passing())
        assert tracker.get_summary()['wall_time'] == 0.5

    def test_failing_callback_is_logged(self, caplog):
        def broken(report):
            raise RuntimeError("sink closed")

        tracker = ReportTracker()
        tracker.register_callback(broken)
        with caplog.at_level(logging.WARNING):
            tracker.record(passing())
        assert "sink closed" in caplog.text
        assert len(tracker.reports) == 1

    def test_export(self, tmp_path):
        tracker = ReportTracker()
        tracker.record(passing())
        tracker.record(Report.from_error('eq1', ValueError("bad"), 1e-10))
        path = tmp_path / "reports.json"
        tracker.export_to_json(str(path))
        document = json.loads(path.read_text(encoding="utf-8"))
        assert document['summary']['status']['error'] == 1
        assert document['reports'][1]['message'] == "ValueError: bad"
