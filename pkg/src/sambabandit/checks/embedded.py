"""
Embedded chain of q = 1 - p_opt below 1/2, its decay, and the transience sum.

Time is cut into excursions: an excursion starts at the first time q >= 1/2
(sigma) and ends at the first later time q < 1/2 (tau). A trajectory that
starts at q >= 1/2 opens with an excursion. Deleting every excursion and
concatenating what is left gives the embedded chain q_hat(s), which stays
strictly below 1/2.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..bandit import BanditInstance, validate_probs
from ..exceptions import InstanceError, PreconditionError
from ..samba import ode_decay, ode_regret
from ..schedules import (
    FixedSchedule,
    LogCoolingSchedule,
    LogLogCoolingSchedule,
    Schedule,
    SlowlyVaryingSchedule,
    resolve_l,
)
from .report import CheckResult, CheckStatus

_logger = logging.getLogger(__name__)

THRESHOLD = 0.5
MIN_REPLICATIONS = 100
PLATEAU_FRACTION = 0.05


@dataclass
class Excursion:
    sigma: int
    tau: int
    values: np.ndarray = field(repr=False)


@dataclass
class EmbeddedChainTrace:
    """q_hat(s) with the original time of every kept point and the deleted excursions."""

    values: np.ndarray
    times: np.ndarray
    excursions: list[Excursion]
    length: int

    @property
    def sigmas(self) -> list[int]:
        return [e.sigma for e in self.excursions]

    @property
    def taus(self) -> list[int]:
        """End of each excursion; equals ``length`` for one still open at the horizon."""
        return [e.tau for e in self.excursions]

    @property
    def entered(self) -> bool:
        return self.values.size > 0


def embedded_chain_analysis(trajectory: Sequence[float]) -> EmbeddedChainTrace:
    """Split ``trajectory`` (q at t = 0..T) into the embedded chain and its excursions."""
    q = np.asarray(trajectory, dtype=float)
    if q.ndim != 1 or q.size == 0:
        raise PreconditionError("trajectory must be a non-empty 1-d sequence")
    above = q >= THRESHOLD
    # boundaries where the above/below state flips
    flips = np.flatnonzero(np.diff(above.astype(np.int8))) + 1
    starts = np.concatenate(([0], flips))
    ends = np.concatenate((flips, [q.size]))

    excursions = [
        Excursion(sigma=int(s), tau=int(e), values=q[s:e].copy())
        for s, e in zip(starts, ends)
        if above[s]
    ]
    times = np.flatnonzero(~above)
    return EmbeddedChainTrace(values=q[times].copy(), times=times, excursions=excursions, length=q.size)


def reinsert_excursions(trace: EmbeddedChainTrace) -> np.ndarray:
    """Rebuild the original trajectory from the embedded chain and its excursions."""
    out = np.empty(trace.length)
    out[trace.times] = trace.values
    for exc in trace.excursions:
        out[exc.sigma : exc.tau] = exc.values
    return out


# ---------------------------------------------------------------------------
# Decay bounds
# ---------------------------------------------------------------------------


def decay_bound(schedule: Schedule, n_arms: int, gap: float, s: float) -> float | None:
    """Upper bound on E q_hat(s), or ``None`` where no explicit bound applies.

    Fixed: N / (2N + alpha gap s). Log cooling: (N / (s beta gap)) log(s beta gap)
    for s beta gap >= e. Log-log cooling: (N / (s beta gap)) log(e + log(s beta gap))
    for s beta gap >= 1.
    """
    if isinstance(schedule, FixedSchedule):
        return n_arms / (2.0 * n_arms + schedule.alpha * gap * s)
    if isinstance(schedule, LogCoolingSchedule):
        x = s * schedule.beta * gap
        return n_arms / x * math.log(x) if x >= math.e else None
    if isinstance(schedule, LogLogCoolingSchedule):
        x = s * schedule.beta * gap
        return n_arms / x * math.log(math.e + math.log(x)) if x >= 1.0 else None
    return None


@dataclass
class DecayPoint:
    s: int
    mean: float
    stderr: float
    runs: int
    bound: float | None

    @property
    def passed(self) -> bool | None:
        if self.bound is None or self.runs < 2:
            return None
        return self.mean <= self.bound + 3.0 * self.stderr


def embedded_decay(
    traces: Sequence[EmbeddedChainTrace],
    schedule: Schedule,
    n_arms: int,
    gap: float,
    s_values: Sequence[int],
) -> list[DecayPoint]:
    """Mean and standard error of q_hat(s) over the traces long enough to reach s."""
    points = []
    for s in s_values:
        vals = np.array([tr.values[s] for tr in traces if tr.values.size > s])
        n = vals.size
        mean = float(vals.mean()) if n else math.nan
        se = float(vals.std(ddof=1) / math.sqrt(n)) if n > 1 else math.nan
        points.append(DecayPoint(int(s), mean, se, n, decay_bound(schedule, n_arms, gap, s)))
    return points


def check_embedded_decay(
    trajectories: Sequence[Sequence[float]],
    schedule: Schedule,
    n_arms: int,
    gap: float,
    s_values: Sequence[int],
) -> CheckResult:
    """Assert mean q_hat(s) <= bound + 3 stderr at each s; inconclusive below 100 runs."""
    traces = [embedded_chain_analysis(q) for q in trajectories]
    name = f"embedded_decay_{schedule.label}"
    if not any(tr.entered for tr in traces):
        return CheckResult(name, CheckStatus.INCONCLUSIVE, "no trajectory entered q < 1/2")

    if isinstance(schedule, SlowlyVaryingSchedule):
        return _slowly_varying_decay(name, traces, schedule, s_values)

    points = embedded_decay(traces, schedule, n_arms, gap, s_values)
    worst = {}
    failed = False
    for pt in points:
        worst[f"s={pt.s}"] = {"mean": pt.mean, "stderr": pt.stderr, "bound": pt.bound, "runs": pt.runs}
        if pt.passed is False:
            failed = True
    detail = "; ".join(
        f"s={pt.s}: {pt.mean:.4g}+/-{pt.stderr:.2g} vs {pt.bound:.4g}" if pt.bound is not None
        else f"s={pt.s}: no explicit bound"
        for pt in points
    )
    if len(traces) < MIN_REPLICATIONS:
        return CheckResult(name, CheckStatus.INCONCLUSIVE, f"{len(traces)} runs; {detail}", worst)
    if failed:
        return CheckResult(name, CheckStatus.FAIL, detail, worst)
    if any(pt.passed is None for pt in points):
        return CheckResult(name, CheckStatus.INCONCLUSIVE, detail, worst)
    return CheckResult(name, CheckStatus.PASS, detail, worst)


def _slowly_varying_decay(name, traces, schedule: SlowlyVaryingSchedule, s_values) -> CheckResult:
    """The general schedule has no explicit constant: report s * q_hat(s) * l(1/s) only."""
    l_fn = resolve_l(schedule.l)
    products = {}
    for s in s_values:
        vals = [tr.values[s] for tr in traces if tr.values.size > s]
        if vals and s > 0:
            products[f"s={s}"] = float(np.mean(vals)) * s * l_fn(1.0 / s)
    detail = ", ".join(f"{k}: {v:.4g}" for k, v in products.items())
    return CheckResult(name, CheckStatus.INFO, f"s*q_hat(s)*l(1/s): {detail}", products)


# ---------------------------------------------------------------------------
# Transience sum
# ---------------------------------------------------------------------------


@dataclass
class QEstimate:
    """Partial sums Q_hat(t) of the empirical P(q(u) >= 1/2), u <= t."""

    partial_sums: np.ndarray
    runs: int
    plateau_fraction: float = PLATEAU_FRACTION

    @property
    def total(self) -> float:
        return float(self.partial_sums[-1])

    @property
    def tail_increment(self) -> float:
        horizon = self.partial_sums.size - 1
        return self.total - float(self.partial_sums[horizon // 2])

    @property
    def plateau(self) -> bool:
        return self.tail_increment <= self.plateau_fraction * self.total

    @property
    def status(self) -> CheckStatus:
        if self.runs < MIN_REPLICATIONS:
            return CheckStatus.INCONCLUSIVE
        return CheckStatus.PASS if self.plateau else CheckStatus.FAIL


def estimate_Q(
    trajectories: Sequence[Sequence[float]], horizon: int | None = None,
    plateau_fraction: float = PLATEAU_FRACTION,
) -> QEstimate:
    """Q_hat(t) over replications of q(t), t = 0..T (truncated to ``horizon`` when given)."""
    stack = np.vstack([np.asarray(q, dtype=float) for q in trajectories])
    if horizon is not None:
        stack = stack[:, : horizon + 1]
    frac = (stack >= THRESHOLD).mean(axis=0)
    return QEstimate(np.cumsum(frac), stack.shape[0], plateau_fraction)


def check_Q_plateau(trajectories: Sequence[Sequence[float]]) -> CheckResult:
    est = estimate_Q(trajectories)
    return CheckResult(
        "transience_plateau",
        est.status,
        f"Q_hat(T)={est.total:.6g}, Q_hat(T)-Q_hat(T/2)={est.tail_increment:.3g} over {est.runs} runs",
        {"Q_hat": est.total, "tail_increment": est.tail_increment, "runs": est.runs},
    )


# ---------------------------------------------------------------------------
# Mean-field decay
# ---------------------------------------------------------------------------


def check_ode_decay(p0: float, alpha: float, gap: float, horizon: int) -> CheckResult:
    """Compare the recursion p <- p - alpha gap p^2 with the ODE solution p0/(1 + alpha gap p0 t)."""
    if not (0.0 < p0 < 1.0 and 0.0 < alpha * gap <= 1.0):
        raise PreconditionError("need 0 < p0 < 1 and 0 < alpha * gap <= 1")
    p = p0
    worst_ratio = 1.0
    worst_t = 0
    for t in range(1, horizon + 1):
        p -= alpha * gap * p * p
        ratio = p / ode_decay(p0, alpha, gap, t)
        if abs(ratio - 1.0) > abs(worst_ratio - 1.0):
            worst_ratio, worst_t = ratio, t
    below = p <= ode_decay(p0, alpha, gap, horizon) + 1e-15
    return CheckResult(
        "ode_decay",
        CheckStatus.INFO,
        f"recursion/ODE ratio within [{min(worst_ratio, 1.0):.4f}, {max(worst_ratio, 1.0):.4f}], "
        f"recursion {'below' if below else 'above'} the ODE at T={horizon}",
        {"p0": p0, "alpha": alpha, "gap": gap, "T": horizon, "worst_ratio": worst_ratio, "t": worst_t},
    )


def check_ode_regret(
    instance: BanditInstance, p0: Sequence[float], alpha: float, horizon: int
) -> CheckResult:
    """Mean-field regret along p_a <- p_a - alpha gap_a p_a^2 stays under the ODE regret integral.

    Per-step regret is r* minus the expected reward of the current vector, summed
    over steps 1..T. Since the recursion sits below the ODE solution and gaps are
    at most 1, the total never exceeds ``ode_regret``.
    """
    try:
        probs = validate_probs(p0)
    except InstanceError as exc:
        raise PreconditionError(str(exc)) from None
    if probs.size != instance.n_arms:
        raise PreconditionError(f"p0 has {probs.size} entries for {instance.n_arms} arms")
    gaps = np.asarray(instance.gaps)
    if not (alpha > 0.0 and np.all(alpha * gaps <= 1.0)):
        raise PreconditionError(f"need 0 < alpha and alpha * gap <= 1, got alpha={alpha}")

    p = probs.copy()
    suboptimal = gaps > 0
    regret = 0.0
    for _ in range(horizon):
        p[suboptimal] -= alpha * gaps[suboptimal] * p[suboptimal] ** 2
        p[instance.optimal_arm] = 1.0 - p[np.arange(p.size) != instance.optimal_arm].sum()
        regret += instance.optimal_mean - instance.expected_reward(p)

    bound = ode_regret(probs, alpha, gaps, horizon)
    ok = regret <= bound * (1.0 + 1e-12)
    return CheckResult(
        "ode_regret",
        CheckStatus.PASS if ok else CheckStatus.FAIL,
        f"mean-field regret {regret:.6g} vs ODE bound {bound:.6g} at T={horizon}",
        {"alpha": alpha, "T": horizon, "regret": regret, "bound": bound},
    )
