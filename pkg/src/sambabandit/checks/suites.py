"""
Named verification suites run by ``samba verify``.
"""

from __future__ import annotations

import logging
import time
from typing import Callable, Sequence

import numpy as np

from ..agents import AgentSpec
from ..bandit import make_instance
from ..exceptions import ConfigError
from ..harness import ExperimentConfig, run_experiment_detailed
from ..schedules import (
    FixedSchedule,
    LogCoolingSchedule,
    LogLogCoolingSchedule,
    Schedule,
    SlowlyVaryingSchedule,
)
from . import drift, embedded, inequalities, shapes
from .report import CheckReport, CheckResult, CheckStatus, merge_reports

_logger = logging.getLogger(__name__)

SUITES = ("lemmas", "drift", "embedded", "all")

NINE_ARMS = tuple(round(0.1 * k, 1) for k in range(1, 10))


def _timed(report_fn: Callable[[], CheckReport]) -> CheckReport:
    start = time.perf_counter()
    report = report_fn()
    report.duration_seconds = time.perf_counter() - start
    return report


def lemmas_suite(resolution: int = 10_000, recursion_cases: int = 1000, seed: int = 0) -> CheckReport:
    report = CheckReport(suite="lemmas")
    report.add(inequalities.check_lambert_w())
    report.extend(inequalities.check_inequality_suite(resolution, seed).results)

    report.add(inequalities.check_recursion_bounds(0.5, 0.1, 1.0, 10, "plain"))
    report.add(inequalities.check_recursion_bounds(0.5, 0.1, 1.0, 100, "log_cooling"))
    report.add(inequalities.check_recursion_bounds(0.5, 0.1, 1.0, 100, "loglog_cooling"))
    for variant in inequalities.VARIANTS:
        report.add(inequalities.check_random_recursions(variant, recursion_cases, seed))

    closed_form: list[Schedule] = [
        FixedSchedule(alpha=0.1),
        LogCoolingSchedule(beta=1.0),
        LogLogCoolingSchedule(beta=1.0),
    ]
    for sched in closed_form:
        report.add(shapes.check_schedule_shape(sched, resolution))
    for l_name in ("inv_log", "inv_loglog"):
        report.add(shapes.check_schedule_shape(SlowlyVaryingSchedule(l=l_name), 200))
        report.add(shapes.check_gamma_asymptotic(l_name))

    report.add(embedded.check_ode_decay(1.0 / 9.0, 0.1, 0.1, 10_000))
    nine = make_instance(NINE_ARMS)
    report.add(embedded.check_ode_regret(nine, np.full(nine.n_arms, 1.0 / nine.n_arms), 0.1, 10_000))
    return report


def embedded_suite(
    replications: int = 100,
    horizon: int = 10_000,
    seed: int = 0,
    jobs: int = 1,
    schedules: Sequence[Schedule] | None = None,
    s_values: Sequence[int] | None = None,
) -> CheckReport:
    """Simulate SAMBA on nine arms 0.1..0.9 and check the embedded-chain decay and Q plateau."""
    if schedules is None:
        schedules = (FixedSchedule(alpha=0.1),)
    if replications < 1 or horizon < 2:
        raise ConfigError("embedded suite needs replications >= 1 and horizon >= 2", "replications")
    if s_values is None:
        s_values = [s for s in (100, 1000, 10_000) if s <= horizon // 2] or [horizon // 2]

    instance = make_instance(NINE_ARMS, label="nine-arms")
    agents = tuple(AgentSpec(kind="samba", name=s.label, schedule=s) for s in schedules)
    run = run_experiment_detailed(
        ExperimentConfig(
            name="embedded",
            instances=(instance,),
            agents=agents,
            horizon=horizon,
            replications=replications,
            base_seed=seed,
            snapshots=(horizon,),
            record_trajectory=True,
        ),
        jobs=jobs,
        progress=False,
    )

    report = CheckReport(suite="embedded")
    if replications < embedded.MIN_REPLICATIONS:
        _logger.warning(
            "embedded suite with %d replications (< %d): results are inconclusive",
            replications,
            embedded.MIN_REPLICATIONS,
        )
    assert instance.min_gap is not None
    for ai, sched in enumerate(schedules):
        trajectories = [r.trajectory for r in run.results[(ai, 0)] if r.trajectory is not None]
        traces = [embedded.embedded_chain_analysis(q) for q in trajectories]
        exact = all(np.array_equal(embedded.reinsert_excursions(tr), q) for tr, q in zip(traces, trajectories))
        report.add(
            CheckResult(
                f"excursion_reinsertion_{sched.label}",
                CheckStatus.PASS if exact else CheckStatus.FAIL,
                f"{len(traces)} trajectories rebuilt exactly" if exact else "reinsertion mismatch",
            )
        )
        report.add(
            embedded.check_embedded_decay(trajectories, sched, instance.n_arms, instance.min_gap, s_values)
        )
        q_check = embedded.check_Q_plateau(trajectories)
        q_check.name = f"{q_check.name}_{sched.label}"
        report.add(q_check)
    return report


def run_suite(
    name: str,
    resolution: int = 10_000,
    replications: int = 100,
    horizon: int = 10_000,
    seed: int = 0,
    jobs: int = 1,
) -> CheckReport:
    if name not in SUITES:
        raise ConfigError(f"unknown suite {name!r} (known: {', '.join(SUITES)})", "suite")
    builders: dict[str, Callable[[], CheckReport]] = {
        "lemmas": lambda: lemmas_suite(resolution, seed=seed),
        "drift": lambda: drift.drift_report(seed=seed),
        "embedded": lambda: embedded_suite(replications, horizon, seed, jobs),
    }
    if name != "all":
        report = _timed(builders[name])
    else:
        report = merge_reports("all", [_timed(builders[k]) for k in ("lemmas", "drift", "embedded")])
    _logger.info("Suite %s: %s", name, report.counts())
    return report
