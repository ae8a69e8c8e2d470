"""Tests for the markdown report over a results directory."""
import pytest

from sinai_lab.exceptions import ResultIoError
from sinai_lab.report import emit_report
from sinai_lab.utils import save_as_json


def _result(name, passed):
    return {
        "schema": 1,
        "name": name,
        "seed": 7,
        "rows": [{"quantity": "phi(0)", "x": 0.0, "estimate": 0.5, "prediction": 0.5, "stderr": None, "pass": passed}],
        "checks": [{"name": "phi(0) = 1/2", "pass": passed, "detail": ""}],
        "pass": passed,
    }


def test_empty_directory(tmp_path):
    text, code = emit_report(str(tmp_path))
    assert code == 0
    assert "suites: 0, failing: 0" in text
    assert (tmp_path / "REPORT.md").read_text() == text


def test_failing_suite(tmp_path):
    save_as_json(_result("density", True), str(tmp_path / "density.json"))
    save_as_json(_result("renewal", False), str(tmp_path / "renewal.json"))
    text, code = emit_report(str(tmp_path))
    assert code == 2
    assert "## density (PASS)" in text
    assert "## renewal (FAIL)" in text
    assert "Failed checks: phi(0) = 1/2" in text


def test_unreadable_results(tmp_path):
    save_as_json(_result("density", True), str(tmp_path / "density.json"))
    (tmp_path / "broken.json").write_text("{")
    save_as_json({"name": "slopes"}, str(tmp_path / "slopes.json"))
    text, code = emit_report(str(tmp_path))
    assert code == 1
    assert "- broken.json" in text and "- slopes.json" in text


def test_report_is_idempotent(tmp_path):
    save_as_json(_result("density", True), str(tmp_path / "density.json"))
    first, _ = emit_report(str(tmp_path))
    second, code = emit_report(str(tmp_path))
    assert first == second
    assert code == 0


def test_missing_directory(tmp_path):
    with pytest.raises(ResultIoError):
        emit_report(str(tmp_path / "absent"))
