"""Tests for the Lambert W solver, the inequality grid and the recursion bounds."""

from __future__ import annotations

import math

import numpy as np
import pytest

from sambabandit.checks import inequalities
from sambabandit.checks.inequalities import (
    check_inequality_suite,
    check_lambert_w,
    check_random_recursions,
    check_recursion_bounds,
    harmonic_tail,
    harmonic_two_term_crossover,
    harmonic_two_term_info,
    iterate_recursion,
    lambert_w,
    recursion_bound,
)
from sambabandit.checks.report import CheckStatus
from sambabandit.exceptions import PreconditionError

# ---------------------------------------------------------------------------
# Lambert W
# ---------------------------------------------------------------------------


class TestLambertW:
    @pytest.mark.parametrize(
        "y, expected",
        [
            (math.e, 1.0),
            (10.0, 1.7455280027406994),
            (math.exp(math.e + 1.0), math.e),
        ],
    )
    def test_known_values(self, y: float, expected: float) -> None:
        assert lambert_w(y) == pytest.approx(expected, rel=1e-12)

    def test_defining_identity(self) -> None:
        for y in (3.0, 50.0, 1e4, 1e12):
            w = lambert_w(y)
            assert w * math.exp(w) == pytest.approx(y, rel=1e-12)

    @pytest.mark.parametrize("y", [2.0, 0.0, -1.0, math.nan, math.inf])
    def test_domain(self, y: float) -> None:
        with pytest.raises(PreconditionError):
            lambert_w(y)

    def test_accuracy_check_passes(self) -> None:
        assert check_lambert_w(resolution=200).status == CheckStatus.PASS


# ---------------------------------------------------------------------------
# Inequality grid
# ---------------------------------------------------------------------------


class TestInequalities:
    def test_log_ratio_at_upper_end(self) -> None:
        z = 1.0 / 3.0
        lhs = -math.log1p(-z) / (1.0 - z)
        assert lhs == pytest.approx(0.608198, abs=1e-6)
        assert z + 4 * z * z == pytest.approx(0.777778, abs=1e-6)

    def test_harmonic_tail_matches_direct_sum(self) -> None:
        value = float(harmonic_tail(np.array(1.0), np.array(3.0), np.array(1.0), np.array(10.0)))
        assert value == pytest.approx(sum(1.0 / (3 + s) for s in range(10)), rel=1e-12)
        assert value == pytest.approx(1.603211, abs=1e-6)
        assert value <= math.log(10.0)

    def test_two_term_crossover(self) -> None:
        x = harmonic_two_term_crossover()
        assert 2.4 < x < 2.5
        assert 1.0 / x + 1.0 / (x + 1.0) == pytest.approx(math.log(2.0))

    def test_t2_counterexample_reported_as_info(self) -> None:
        result = harmonic_two_term_info()
        assert result.status == CheckStatus.INFO
        assert result.worst_point["lhs"] > result.worst_point["rhs"]

    def test_suite_passes(self) -> None:
        report = check_inequality_suite(resolution=200)
        assert report.passed
        assert {r.name for r in report.by_status(CheckStatus.PASS)} == {
            "lambert_w_lower_bound",
            "log_ratio_bound",
            "harmonic_sum_bound",
            "log_sum_bound",
            "loglog_sum_bound",
        }

    def test_suite_rejects_coarse_grid(self) -> None:
        with pytest.raises(PreconditionError):
            check_inequality_suite(resolution=50)

    def test_broken_inequality_is_located(self, monkeypatch) -> None:
        monkeypatch.setattr(inequalities, "harmonic_tail", lambda a, b, c, t: (a / c) * np.log(t) + 1.0)
        result = inequalities.check_harmonic_bound(200)
        assert result.status == CheckStatus.FAIL
        assert {"A", "B", "C", "T", "lhs", "rhs"} <= set(result.worst_point)


# ---------------------------------------------------------------------------
# Recursions
# ---------------------------------------------------------------------------


class TestRecursions:
    def test_plain_bound_value(self) -> None:
        assert float(recursion_bound(0.5, 0.1, 1.0, 10, "plain")) == pytest.approx(1.0 / 3.0)

    def test_log_cooling_bound_value(self) -> None:
        assert float(recursion_bound(0.5, 0.1, 1.0, 100, "log_cooling")) == pytest.approx(
            0.230259, abs=1e-6
        )

    @pytest.mark.parametrize("variant", inequalities.VARIANTS)
    def test_fixed_cases_pass(self, variant) -> None:
        horizon = 10 if variant == "plain" else 100
        result = check_recursion_bounds(0.5, 0.1, 1.0, horizon, variant)
        assert result.status == CheckStatus.PASS
        assert result.worst_point["q_T"] <= result.worst_point["bound"]

    def test_iteration_is_decreasing(self) -> None:
        values = [float(iterate_recursion(0.5, 0.1, 1.0, t, "plain")[0]) for t in range(20)]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_vectorised_matches_single(self) -> None:
        many = iterate_recursion([0.3, 0.6], [0.2, 0.5], [1.0, 1.0], [5, 40], "log_cooling")
        one = iterate_recursion(0.6, 0.5, 1.0, 40, "log_cooling")
        assert many[1] == pytest.approx(one[0], rel=1e-14)

    @pytest.mark.parametrize(
        "args",
        [
            (0.0, 0.1, 1.0, 10, "plain"),
            (0.5, 0.0, 1.0, 10, "plain"),
            (0.5, 1.5, 1.0, 10, "plain"),
            (0.5, 0.1, 1.0, 10, "log_cooling"),
            (0.5, 0.1, 3.0, 1000, "log_cooling"),
            (0.5, 0.1, 1.0, 10, "cubic"),
        ],
    )
    def test_domain(self, args) -> None:
        with pytest.raises(PreconditionError):
            check_recursion_bounds(*args)

    @pytest.mark.parametrize("variant", inequalities.VARIANTS)
    def test_random_cases_pass(self, variant) -> None:
        assert check_random_recursions(variant, n_cases=100, seed=4).status == CheckStatus.PASS
