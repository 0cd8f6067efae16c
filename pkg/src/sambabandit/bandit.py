"""
Bernoulli bandit environment, reward sampling and regret accounting.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exceptions import InstanceError

_logger = logging.getLogger(__name__)

PROB_SUM_TOL = 1e-9


@dataclass(frozen=True)
class BanditInstance:
    """Fixed Bernoulli arm means with the derived optimum and gaps.

    ``min_gap`` is ``None`` when the optimum is tied (``degenerate``): regret
    is still well defined but the theory checks refuse such instances.
    """

    means: tuple[float, ...]
    optimal_arm: int
    optimal_mean: float
    gaps: tuple[float, ...]
    min_gap: float | None
    degenerate: bool = False
    label: str = field(default="", compare=False)

    @property
    def n_arms(self) -> int:
        return len(self.means)

    def expected_reward(self, probs: Sequence[float]) -> float:
        """Mean reward of a policy that plays arm ``a`` with probability ``probs[a]``."""
        return float(np.dot(np.asarray(probs, dtype=float), np.asarray(self.means)))

    def check_arm(self, arm: int) -> int:
        if not 0 <= arm < len(self.means):
            raise InstanceError(f"arm {arm} out of range for {len(self.means)} arms")
        return arm


def make_instance(means: Sequence[float], label: str = "") -> BanditInstance:
    """Build a :class:`BanditInstance` from arm means in [0, 1]."""
    values = tuple(float(m) for m in means)
    if len(values) < 2:
        raise InstanceError(f"a bandit needs at least 2 arms, got {len(values)}")
    for i, m in enumerate(values):
        if not (0.0 <= m <= 1.0) or math.isnan(m):
            raise InstanceError(f"mean of arm {i} is {m}, outside [0, 1]")

    best = max(values)
    optimal_arm = values.index(best)
    gaps = tuple(best - m for m in values)
    n_best = sum(1 for m in values if m == best)
    degenerate = n_best > 1
    positive = [g for g in gaps if g > 0]
    min_gap = None if degenerate or not positive else min(positive)

    if degenerate:
        _logger.debug("Instance %s has a tied optimum (%d arms at %.6g)", label, n_best, best)

    return BanditInstance(
        means=values,
        optimal_arm=optimal_arm,
        optimal_mean=best,
        gaps=gaps,
        min_gap=min_gap,
        degenerate=degenerate,
        label=label,
    )


def sample_reward(instance: BanditInstance, arm: int, rng: np.random.Generator) -> int:
    """Draw a Bernoulli reward for ``arm``; consumes exactly one uniform."""
    instance.check_arm(arm)
    return 1 if rng.random() < instance.means[arm] else 0


def per_step_pseudo_regret(instance: BanditInstance, played: int) -> float:
    """Gap of the played arm, r* - r_played."""
    return instance.gaps[instance.check_arm(played)]


def validate_probs(probs: Sequence[float], tol: float = PROB_SUM_TOL) -> np.ndarray:
    """Return ``probs`` as a float array, raising if it is not on the simplex."""
    arr = np.asarray(probs, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise InstanceError("probability vector must be a non-empty 1-d sequence")
    if np.any(~np.isfinite(arr)) or np.any(arr < 0):
        raise InstanceError(f"probability vector has negative or non-finite entries: {arr}")
    total = float(arr.sum())
    if abs(total - 1.0) > tol:
        raise InstanceError(f"probability vector sums to {total!r}, not 1")
    return arr


def uniform_probs(n: int) -> np.ndarray:
    """Uniform starting state 1/n for each of ``n`` arms."""
    if int(n) != n or n < 2:
        raise InstanceError(f"need at least 2 arms for a probability vector, got {n}")
    return np.full(int(n), 1.0 / n)


def sample_categorical(probs: np.ndarray, rng: np.random.Generator) -> int:
    """Inverse-CDF draw from ``probs``; consumes exactly one uniform."""
    u = rng.random()
    idx = int(np.searchsorted(np.cumsum(probs), u, side="right"))
    if idx >= probs.size:
        # u landed in the rounding gap above the cumulative sum
        idx = int(np.flatnonzero(probs > 0)[-1])
    return idx
