"""
SAMBA: a stochastic-approximation policy-gradient bandit.

The state is a probability vector over arms. Each step the leading arm
(largest probability, ties broken uniformly at random) is identified, an arm
is played by sampling from the vector, and every non-leading arm ``a`` moves
by the step size ``gamma(p_a)`` times the importance-weighted reward
difference

    p_a <- p_a + gamma(p_a) * [ 1{a = played} R / p_a - 1{leader = played} R / p_leader ]

The leader absorbs the remainder so the vector stays on the simplex. For
rates alpha(p) < 1 every entry stays strictly positive.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bandit import sample_categorical, uniform_probs, validate_probs
from .exceptions import InstanceError, PreconditionError, ScheduleError
from .schedules import (
    FixedSchedule,
    LogCoolingSchedule,
    LogLogCoolingSchedule,
    Schedule,
    step_size,
)

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SambaState:
    """Probabilities maintained by SAMBA; one entry per arm."""

    probs: np.ndarray

    @classmethod
    def from_probs(cls, probs: Sequence[float]) -> SambaState:
        return cls(probs=validate_probs(probs).copy())

    @classmethod
    def uniform(cls, n_arms: int) -> SambaState:
        return cls(probs=uniform_probs(n_arms))

    @property
    def n_arms(self) -> int:
        return int(self.probs.size)


def leading_arm(state: SambaState, rng: np.random.Generator) -> int:
    """Arg-max of the probabilities; uniform among exact ties.

    ``rng`` is only consumed when the maximum is tied.
    """
    p = state.probs
    if p.size == 0:
        raise InstanceError("empty SAMBA state")
    best = np.flatnonzero(p == p.max())
    if best.size == 1:
        return int(best[0])
    return int(best[rng.integers(best.size)])


def samba_select(state: SambaState, rng: np.random.Generator) -> int:
    """Sample an arm from the categorical distribution ``state.probs``."""
    return sample_categorical(state.probs, rng)


def schedule_rates(schedule: Schedule, p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised (alpha(p), gamma(p)) for the closed-form schedules."""
    if isinstance(schedule, FixedSchedule):
        alpha = np.full(p.shape, schedule.alpha)
    elif isinstance(schedule, LogCoolingSchedule):
        alpha = schedule.beta / (1.0 - np.log(p))
    elif isinstance(schedule, LogLogCoolingSchedule):
        alpha = schedule.beta / np.log(math.e - np.log(p))
    else:
        gamma = np.array([step_size(schedule, float(x)) for x in p])
        return gamma / (p * p), gamma
    return alpha, alpha * p * p


def samba_update(
    state: SambaState,
    schedule: Schedule,
    leader: int,
    played: int,
    reward: int,
    floor: float = 0.0,
) -> SambaState:
    """Apply one SAMBA step and return the new state (the input is not mutated).

    ``floor`` (off by default) clips non-leading entries from below to guard
    against underflow on extremely long horizons.
    """
    p = state.probs
    n = p.size
    if not (0 <= leader < n and 0 <= played < n):
        raise InstanceError(f"arm index out of range (leader={leader}, played={played}, n={n})")
    if reward not in (0, 1):
        raise InstanceError(f"reward must be 0 or 1, got {reward!r}")
    if reward == 0:
        return state

    new = p.copy()
    if played != leader:
        # only the played arm's bracket is non-zero: it gains gamma(p)/p
        idx = np.array([played])
    else:
        idx = np.flatnonzero(np.arange(n) != leader)

    alpha, gamma = schedule_rates(schedule, p[idx])
    if np.any(alpha >= 1.0):
        bad = int(idx[int(np.argmax(alpha))])
        raise ScheduleError(
            f"schedule rate alpha(p)={float(alpha.max()):.6g} >= 1 at arm {bad} "
            f"(p={float(p[bad]):.6g}); positivity of the update needs alpha < 1",
            "schedule",
        )

    if played != leader:
        new[idx] = p[idx] + gamma / p[idx]
    else:
        new[idx] = p[idx] - gamma / p[leader]

    if floor > 0.0:
        others = np.arange(n) != leader
        new[others] = np.maximum(new[others], floor)

    new[leader] = 1.0 - new[np.arange(n) != leader].sum()
    return SambaState(probs=new)


def alpha_threshold(r_star: float, delta: float) -> float:
    """Admissibility threshold gap / (r* - gap) for a fixed rate; ``inf`` when r* = gap."""
    if not (0.0 < delta <= r_star <= 1.0):
        raise PreconditionError(f"need 0 < delta <= r_star <= 1, got r_star={r_star}, delta={delta}")
    if r_star == delta:
        return math.inf
    return delta / (r_star - delta)


# ---------------------------------------------------------------------------
# Mean-field heuristic
# ---------------------------------------------------------------------------


def ode_decay(p0: float, alpha: float, gap: float, t: float) -> float:
    """Solution p(t) = p0 / (1 + alpha*gap*p0*t) of dp/dt = -alpha*gap*p**2."""
    return p0 / (1.0 + alpha * gap * p0 * t)


def ode_regret(p0: Sequence[float], alpha: float, gaps: Sequence[float], horizon: float) -> float:
    """Regret integral of the mean-field flow: sum over gap>0 of log(1+alpha*p0*gap*T)/(alpha*gap)."""
    total = 0.0
    for p, g in zip(p0, gaps):
        if g > 0:
            total += math.log1p(alpha * p * g * horizon) / (alpha * g)
    return total


# ---------------------------------------------------------------------------
# Agent wrapper used by the harness
# ---------------------------------------------------------------------------


@dataclass
class SambaAgent:
    """Single-owner SAMBA agent with the select/update contract of the baselines."""

    schedule: Schedule
    state: SambaState
    floor: float = 0.0
    name: str = ""
    _leader: int | None = field(default=None, repr=False)

    @classmethod
    def create(
        cls,
        schedule: Schedule,
        n_arms: int,
        initial: Sequence[float] | None = None,
        floor: float = 0.0,
        name: str = "",
    ) -> SambaAgent:
        state = SambaState.uniform(n_arms) if initial is None else SambaState.from_probs(initial)
        if state.n_arms != n_arms:
            raise InstanceError(f"initial probabilities have {state.n_arms} entries, expected {n_arms}")
        if np.any(state.probs <= 0):
            _logger.warning("SAMBA initial state has zero entries; those arms are never explored")
        return cls(schedule=schedule, state=state, floor=floor, name=name or schedule.label)

    def select(self, rng: np.random.Generator) -> int:
        self._leader = leading_arm(self.state, rng)
        return samba_select(self.state, rng)

    def update(self, arm: int, reward: int) -> None:
        if self._leader is None:
            raise RuntimeError("update() called before select()")
        self.state = samba_update(self.state, self.schedule, self._leader, arm, reward, self.floor)
        self._leader = None

    def play_probability_of(self, arm: int) -> float:
        return float(self.state.probs[arm])
