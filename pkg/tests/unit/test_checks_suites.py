import pytest

from sambabandit.checks import SUITES, CheckStatus, run_suite
from sambabandit.checks.suites import lemmas_suite
from sambabandit.exceptions import ConfigError


def test_suite_names():
    assert SUITES == ("lemmas", "drift", "embedded", "all")


def test_unknown_suite():
    with pytest.raises(ConfigError) as excinfo:
        run_suite("proofs")
    assert excinfo.value.key == "suite"


def test_lemmas_suite_passes_at_low_resolution():
    report = lemmas_suite(resolution=200, recursion_cases=100)
    assert report.passed
    assert not report.by_status(CheckStatus.FAIL)
    names = [r.name for r in report.results]
    assert "lambert_w_accuracy" in names
    assert "harmonic_sum_bound_T2" in names
    assert "ode_decay" in names
    (ode_regret,) = [r for r in report.results if r.name == "ode_regret"]
    assert ode_regret.status == CheckStatus.PASS


def test_run_suite_times_and_logs(caplog):
    caplog.set_level("INFO", logger="sambabandit.checks.suites")
    report = run_suite("drift", seed=3)
    assert report.suite == "drift"
    assert report.duration_seconds > 0
    assert any("Suite drift" in rec.message for rec in caplog.records)


def test_embedded_rejects_tiny_horizon():
    with pytest.raises(ConfigError):
        run_suite("embedded", horizon=1)
