"""
One-step drift of q = 1 - p_opt under SAMBA.

With the optimal arm leading, the expected change of q is
``sum_{a != a*} gamma(p_a) (r_a - r*)`` and is bounded above by
``-gap * N * gamma(q / N)`` for every convex schedule. The drift is computed
by enumerating the at most ``2N`` (arm, reward) outcomes, so no sampling noise
enters the comparison.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..bandit import BanditInstance, make_instance, sample_categorical, validate_probs
from ..exceptions import PreconditionError
from ..rng import make_rng
from ..samba import SambaState, samba_update
from ..schedules import (
    FixedSchedule,
    LogCoolingSchedule,
    LogLogCoolingSchedule,
    Schedule,
    SlowlyVaryingSchedule,
    step_size,
)
from .report import CheckReport, CheckResult, CheckStatus

_logger = logging.getLogger(__name__)

DRIFT_TOL = 1e-12


@dataclass
class DriftReport:
    """Drift at one state; ``passed`` iff drift <= bound + 3 * stderr (+ rounding slack)."""

    probs: tuple[float, ...]
    means: tuple[float, ...]
    schedule: str
    drift: float
    stderr: float
    bound: float
    closed_form: float
    samples: int = 0
    worst: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.drift <= self.bound + 3.0 * self.stderr + DRIFT_TOL

    @property
    def matches_closed_form(self) -> bool:
        return abs(self.drift - self.closed_form) <= DRIFT_TOL + 3.0 * self.stderr


def _prepare(instance: BanditInstance, probs: Sequence[float]) -> np.ndarray:
    if instance.degenerate or instance.min_gap is None:
        raise PreconditionError("drift bound needs a unique optimal arm (gap > 0)")
    p = validate_probs(probs)
    if p.size != instance.n_arms:
        raise PreconditionError(f"state has {p.size} entries, instance has {instance.n_arms} arms")
    best = instance.optimal_arm
    others = np.delete(p, best)
    if not p[best] > others.max():
        raise PreconditionError("the optimal arm must be the unique leading arm of the state")
    if np.any(p <= 0):
        raise PreconditionError("state must be strictly positive")
    return p


def drift_closed_form(instance: BanditInstance, schedule: Schedule, probs: Sequence[float]) -> float:
    """sum over non-optimal arms of gamma(p_a) (r_a - r*)."""
    p = np.asarray(probs, dtype=float)
    return float(
        sum(
            step_size(schedule, float(p[a])) * (instance.means[a] - instance.optimal_mean)
            for a in range(p.size)
            if a != instance.optimal_arm
        )
    )


def drift_bound(instance: BanditInstance, schedule: Schedule, q: float) -> float:
    """Supermartingale bound -gap * N * gamma(q / N).

    Fixed gives -alpha gap q^2 / N; log cooling gives -(beta gap / N) q^2 / (1 - log(q / N)).
    """
    n = instance.n_arms
    assert instance.min_gap is not None
    if q <= 0.0:
        return 0.0
    return -instance.min_gap * n * step_size(schedule, q / n)


def estimate_drift(instance: BanditInstance, schedule: Schedule, probs: Sequence[float]) -> DriftReport:
    """Exact E[q(t+1) - q(t)] by enumeration of every (arm, reward) outcome."""
    p = _prepare(instance, probs)
    best = instance.optimal_arm
    state = SambaState(probs=p)
    q = 1.0 - p[best]

    drift = 0.0
    for arm in range(p.size):
        weight = p[arm] * instance.means[arm]
        if weight == 0.0:
            continue
        new = samba_update(state, schedule, best, arm, 1)
        drift += weight * (float(np.delete(new.probs, best).sum()) - float(np.delete(p, best).sum()))

    return DriftReport(
        probs=tuple(float(x) for x in p),
        means=instance.means,
        schedule=schedule.label,
        drift=drift,
        stderr=0.0,
        bound=drift_bound(instance, schedule, q),
        closed_form=drift_closed_form(instance, schedule, p),
    )


def sample_drift(
    instance: BanditInstance,
    schedule: Schedule,
    probs: Sequence[float],
    n_samples: int,
    rng: np.random.Generator,
) -> DriftReport:
    """Monte Carlo estimate of the same drift, with its standard error."""
    p = _prepare(instance, probs)
    best = instance.optimal_arm
    state = SambaState(probs=p)
    q = float(np.delete(p, best).sum())
    deltas = np.empty(n_samples)
    for i in range(n_samples):
        arm = sample_categorical(p, rng)
        reward = 1 if rng.random() < instance.means[arm] else 0
        new = samba_update(state, schedule, best, arm, reward)
        deltas[i] = float(np.delete(new.probs, best).sum()) - q
    se = float(deltas.std(ddof=1) / math.sqrt(n_samples)) if n_samples > 1 else 0.0
    return DriftReport(
        probs=tuple(float(x) for x in p),
        means=instance.means,
        schedule=schedule.label,
        drift=float(deltas.mean()),
        stderr=se,
        bound=drift_bound(instance, schedule, q),
        closed_form=drift_closed_form(instance, schedule, p),
        samples=n_samples,
    )


# ---------------------------------------------------------------------------
# Random configurations
# ---------------------------------------------------------------------------


def _random_schedule(rng: np.random.Generator, allow_quadrature: bool) -> Schedule:
    kind = int(rng.integers(4 if allow_quadrature else 3))
    if kind == 0:
        return FixedSchedule(alpha=float(rng.uniform(1e-3, 0.95)))
    if kind == 1:
        return LogCoolingSchedule(beta=float(rng.uniform(1e-3, 1.0)))
    if kind == 2:
        return LogLogCoolingSchedule(beta=float(rng.uniform(1e-3, 1.0)))
    return SlowlyVaryingSchedule(l=str(rng.choice(["inv_log", "inv_loglog"])))


def random_drift_case(
    rng: np.random.Generator, allow_quadrature: bool = False
) -> tuple[BanditInstance, Schedule, np.ndarray]:
    """A non-degenerate instance, a schedule and a positive state led by the optimal arm."""
    n = int(rng.integers(2, 11))
    while True:
        means = rng.uniform(0.0, 1.0, n)
        inst = make_instance(means)
        if not inst.degenerate and inst.min_gap is not None and inst.min_gap > 1e-6:
            break
    while True:
        p = rng.dirichlet(np.full(n, float(rng.uniform(0.2, 3.0))))
        top = int(np.argmax(p))
        p[[top, inst.optimal_arm]] = p[[inst.optimal_arm, top]]
        if np.all(p > 1e-12) and p[inst.optimal_arm] > np.delete(p, inst.optimal_arm).max():
            break
    return inst, _random_schedule(rng, allow_quadrature), p / p.sum()


def check_random_drifts(n_cases: int = 1000, seed: int = 0, n_quadrature: int = 20) -> list[CheckResult]:
    """Exact drift matches the closed form and satisfies the bound on random configurations."""
    rng = make_rng(seed, 8)
    worst_gap = (0.0, None)
    worst_bound = (-math.inf, None)
    total = n_cases + n_quadrature
    for i in range(total):
        inst, sched, p = random_drift_case(rng, allow_quadrature=i >= n_cases)
        rep = estimate_drift(inst, sched, p)
        gap = abs(rep.drift - rep.closed_form)
        if gap >= worst_gap[0]:
            worst_gap = (gap, rep)
        excess = rep.drift - rep.bound
        if excess > worst_bound[0]:
            worst_bound = (excess, rep)

    def point(rep: DriftReport | None) -> dict:
        if rep is None:
            return {}
        return {"schedule": rep.schedule, "probs": list(rep.probs), "means": list(rep.means),
                "drift": rep.drift, "closed_form": rep.closed_form, "bound": rep.bound}

    identity = CheckResult(
        "drift_closed_form",
        CheckStatus.PASS if worst_gap[0] <= DRIFT_TOL else CheckStatus.FAIL,
        f"{total} configurations, max |drift - closed form| = {worst_gap[0]:.3g}",
        point(worst_gap[1]),
    )
    bound = CheckResult(
        "drift_bound",
        CheckStatus.PASS if worst_bound[0] <= DRIFT_TOL else CheckStatus.FAIL,
        f"{total} configurations, max drift - bound = {worst_bound[0]:.3g}",
        point(worst_bound[1]),
    )
    return [identity, bound]


def check_drift_example() -> CheckResult:
    """Two arms (0.9, 0.8), state (0.75, 0.25), fixed alpha 0.1."""
    rep = estimate_drift(make_instance([0.9, 0.8]), FixedSchedule(alpha=0.1), [0.75, 0.25])
    ok = abs(rep.drift + 0.000625) <= DRIFT_TOL and abs(rep.bound + 0.0003125) <= DRIFT_TOL
    return CheckResult(
        "drift_two_arm_example",
        CheckStatus.PASS if ok and rep.passed else CheckStatus.FAIL,
        f"drift={rep.drift:.9g} bound={rep.bound:.9g}",
        {"drift": rep.drift, "bound": rep.bound},
    )


def check_sampled_drift(n_samples: int = 20_000, seed: int = 0) -> CheckResult:
    """Sampled drift agrees with the exact one within three standard errors."""
    inst = make_instance([0.9, 0.5, 0.2])
    sched = FixedSchedule(alpha=0.5)
    probs = [0.4, 0.35, 0.25]
    exact = estimate_drift(inst, sched, probs)
    sampled = sample_drift(inst, sched, probs, n_samples, make_rng(seed, 9))
    ok = abs(sampled.drift - exact.drift) <= 3.0 * sampled.stderr + DRIFT_TOL
    return CheckResult(
        "drift_sampled_agreement",
        CheckStatus.PASS if ok else CheckStatus.FAIL,
        f"sampled {sampled.drift:.6g} +/- {sampled.stderr:.2g} vs exact {exact.drift:.6g}",
        {"sampled": sampled.drift, "stderr": sampled.stderr, "exact": exact.drift},
    )


def drift_report(n_cases: int = 1000, seed: int = 0) -> CheckReport:
    report = CheckReport(suite="drift")
    report.add(check_drift_example())
    report.extend(check_random_drifts(n_cases, seed))
    report.add(check_sampled_drift(seed=seed))
    return report
