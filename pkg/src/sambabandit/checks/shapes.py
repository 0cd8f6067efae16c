"""
Monotonicity and convexity of step-size functions gamma(p) on (0, 1).
"""

from __future__ import annotations

import logging
from typing import Callable

import numpy as np

from ..exceptions import PreconditionError, QuadratureError
from ..samba import schedule_rates
from ..schedules import Schedule, SlowlyVaryingSchedule, gamma_from_l, resolve_l
from .report import CheckResult, CheckStatus

_logger = logging.getLogger(__name__)

SHAPE_TOL = 1e-12


def uniform_interior_grid(n_points: int) -> np.ndarray:
    """``n_points`` equally spaced points strictly inside (0, 1)."""
    if n_points < 3:
        raise PreconditionError(f"shape grid needs at least 3 points, got {n_points}")
    return np.linspace(0.0, 1.0, n_points + 2)[1:-1]


def check_gamma_shape(gamma_fn: Callable[[np.ndarray], np.ndarray], grid: int, name: str) -> CheckResult:
    """First and second differences of ``gamma_fn`` on the grid must be >= -1e-12."""
    p = uniform_interior_grid(grid)
    g = np.asarray(gamma_fn(p), dtype=float)
    d1 = np.diff(g)
    d2 = np.diff(g, 2)
    i1 = int(np.argmin(d1))
    i2 = int(np.argmin(d2))
    if d1[i1] < -SHAPE_TOL:
        return CheckResult(
            f"shape_{name}",
            CheckStatus.FAIL,
            f"decreasing at p={p[i1]:.6g}",
            {"p": float(p[i1]), "first_difference": float(d1[i1])},
        )
    if d2[i2] < -SHAPE_TOL:
        return CheckResult(
            f"shape_{name}",
            CheckStatus.FAIL,
            f"concave at p={p[i2 + 1]:.6g}",
            {"p": float(p[i2 + 1]), "second_difference": float(d2[i2])},
        )
    return CheckResult(
        f"shape_{name}",
        CheckStatus.PASS,
        f"increasing and convex on {grid} points",
        {"min_first_difference": float(d1[i1]), "min_second_difference": float(d2[i2])},
    )


def schedule_gamma(schedule: Schedule) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(schedule, SlowlyVaryingSchedule):
        l_fn = resolve_l(schedule.l)
        return lambda p: np.array([gamma_from_l(l_fn, float(x), schedule.tol) for x in p])
    return lambda p: schedule_rates(schedule, p)[1]


def check_schedule_shape(schedule: Schedule, grid: int = 10_000) -> CheckResult:
    return check_gamma_shape(schedule_gamma(schedule), grid, schedule.label)


def check_gamma_asymptotic(l_name: str, p_values=(1e-2, 1e-4, 1e-6, 1e-8)) -> CheckResult:
    """Ratio gamma(p) / (l(p) p^2 / 2) for small p; tends to 1 for slowly varying l."""
    l_fn = resolve_l(l_name)
    ratios = {}
    for p in p_values:
        scale = l_fn(p) * p * p / 2.0
        if scale == 0.0:
            continue
        try:
            ratios[f"p={p:g}"] = gamma_from_l(l_fn, p, tol=scale * 1e-6) / scale
        except QuadratureError as exc:
            _logger.debug("gamma(%g) for %s: %s", p, l_name, exc)
    detail = ", ".join(f"{k}: {v:.6f}" for k, v in ratios.items()) or "l vanishes"
    return CheckResult(f"gamma_asymptotic_{l_name}", CheckStatus.INFO, detail, ratios)
