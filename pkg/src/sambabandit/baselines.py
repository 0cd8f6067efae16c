"""
Reference bandit algorithms behind the select/update contract used by SAMBA.

Every agent is owned by exactly one replication and mutated in place:
``select(rng)`` returns an arm, ``update(arm, reward)`` feeds back the
Bernoulli reward. ``play_probability_of`` returns ``None`` for agents whose
selection distribution is not tracked.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .bandit import sample_categorical
from .exceptions import ConfigError, InstanceError

_logger = logging.getLogger(__name__)

EpsMode = Literal["fixed", "decaying"]

DECAY_SCALE = 100.0


def softmax(h: np.ndarray) -> np.ndarray:
    """Max-shifted softmax; invariant to adding a constant to ``h``."""
    z = np.exp(h - h.max())
    return z / z.sum()


def exp3_eta(n_arms: int, t: int) -> float:
    """Exp3 learning rate sqrt(ln N / (t N)) (natural log)."""
    if isinstance(n_arms, bool) or int(n_arms) != n_arms or n_arms < 2:
        raise ConfigError(f"n_arms must be an integer >= 2, got {n_arms!r}", "n_arms")
    if int(t) != t or t < 1:
        raise ConfigError(f"t must be an integer >= 1, got {t!r}", "t")
    n = int(n_arms)
    return math.sqrt(math.log(n) / (t * n))


def epsilon_at(mode: EpsMode, t: int, eps: float = 0.1) -> float:
    """Exploration probability at step ``t`` (1-based): fixed eps or min(1, 100/t)."""
    if mode == "fixed":
        return eps
    if t < 1:
        raise ConfigError(f"t must be >= 1, got {t}", "t")
    return min(1.0, DECAY_SCALE / t)


def _check_arm(arm: int, n: int) -> None:
    if not 0 <= arm < n:
        raise InstanceError(f"arm {arm} out of range for {n} arms")


@dataclass
class ThompsonAgent:
    """Beta-Bernoulli Thompson sampling with a uniform Beta(1, 1) prior."""

    n_arms: int
    name: str = "thompson"
    successes: np.ndarray = field(init=False)
    failures: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        # Beta parameters (successes + 1, failures + 1)
        self.successes = np.ones(self.n_arms)
        self.failures = np.ones(self.n_arms)

    def select(self, rng: np.random.Generator) -> int:
        theta = rng.beta(self.successes, self.failures)
        return int(np.argmax(theta))

    def update(self, arm: int, reward: int) -> None:
        _check_arm(arm, self.n_arms)
        self.successes[arm] += reward
        self.failures[arm] += 1 - reward

    def posterior_mean(self) -> np.ndarray:
        return self.successes / (self.successes + self.failures)

    def play_probability_of(self, arm: int) -> float | None:
        return None


@dataclass
class Ucb1Agent:
    """UCB1: play each arm once, then maximise mean + sqrt(2 ln t / n_a)."""

    n_arms: int
    name: str = "ucb1"
    counts: np.ndarray = field(init=False)
    sums: np.ndarray = field(init=False)
    t: int = 0

    def __post_init__(self) -> None:
        self.counts = np.zeros(self.n_arms, dtype=np.int64)
        self.sums = np.zeros(self.n_arms)

    def indices(self) -> np.ndarray:
        means = self.sums / self.counts
        return means + np.sqrt(2.0 * math.log(self.t) / self.counts)

    def select(self, rng: np.random.Generator) -> int:
        unplayed = np.flatnonzero(self.counts == 0)
        if unplayed.size:
            return int(unplayed[0])
        return int(np.argmax(self.indices()))

    def update(self, arm: int, reward: int) -> None:
        _check_arm(arm, self.n_arms)
        self.counts[arm] += 1
        self.sums[arm] += reward
        self.t += 1

    def play_probability_of(self, arm: int) -> float | None:
        return None


@dataclass
class Exp3Agent:
    """Anytime gain-based Exp3 with eta_t = sqrt(ln N / (t N)) recomputed every step."""

    n_arms: int
    name: str = "exp3"
    gains: np.ndarray = field(init=False)
    t: int = 0
    last_probs: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        exp3_eta(self.n_arms, 1)
        self.gains = np.zeros(self.n_arms)

    def distribution(self) -> np.ndarray:
        return softmax(exp3_eta(self.n_arms, self.t + 1) * self.gains)

    def select(self, rng: np.random.Generator) -> int:
        self.last_probs = self.distribution()
        return sample_categorical(self.last_probs, rng)

    def update(self, arm: int, reward: int) -> None:
        _check_arm(arm, self.n_arms)
        probs = self.last_probs if self.last_probs is not None else self.distribution()
        self.gains[arm] += reward / probs[arm]
        self.t += 1
        self.last_probs = None

    def play_probability_of(self, arm: int) -> float | None:
        return float(self.distribution()[arm])


@dataclass
class GbaAgent:
    """Gradient bandit: softmax preferences with an average-reward baseline."""

    n_arms: int
    alpha: float = 0.1
    name: str = "gba"
    preferences: np.ndarray = field(init=False)
    mean_reward: float = 0.0
    steps: int = 0

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise ConfigError(f"gba step size must be positive, got {self.alpha!r}", "alpha")
        self.preferences = np.zeros(self.n_arms)

    def distribution(self) -> np.ndarray:
        return softmax(self.preferences)

    def select(self, rng: np.random.Generator) -> int:
        return sample_categorical(self.distribution(), rng)

    def update(self, arm: int, reward: int) -> None:
        _check_arm(arm, self.n_arms)
        pi = self.distribution()
        onehot = np.zeros(self.n_arms)
        onehot[arm] = 1.0
        self.preferences += self.alpha * (reward - self.mean_reward) * (onehot - pi)
        self.steps += 1
        self.mean_reward += (reward - self.mean_reward) / self.steps

    def play_probability_of(self, arm: int) -> float | None:
        return float(self.distribution()[arm])


@dataclass
class EpsGreedyAgent:
    """epsilon-greedy on sample means; ties go to the lowest index."""

    n_arms: int
    mode: EpsMode = "decaying"
    eps: float = 0.1
    name: str = ""
    means: np.ndarray = field(init=False)
    counts: np.ndarray = field(init=False)
    t: int = 0

    def __post_init__(self) -> None:
        if self.mode not in ("fixed", "decaying"):
            raise ConfigError(f"unknown eps_greedy mode {self.mode!r}", "mode")
        if self.mode == "fixed" and not (0.0 <= self.eps <= 1.0):
            raise ConfigError(f"eps must lie in [0, 1], got {self.eps!r}", "eps")
        if not self.name:
            self.name = "eps-greedy(decaying)" if self.mode == "decaying" else f"eps-greedy({self.eps:g})"
        self.means = np.zeros(self.n_arms)
        self.counts = np.zeros(self.n_arms, dtype=np.int64)

    def select(self, rng: np.random.Generator) -> int:
        eps = epsilon_at(self.mode, self.t + 1, self.eps)
        if rng.random() < eps:
            return int(rng.integers(self.n_arms))
        return int(np.argmax(self.means))

    def update(self, arm: int, reward: int) -> None:
        _check_arm(arm, self.n_arms)
        self.counts[arm] += 1
        self.means[arm] += (reward - self.means[arm]) / self.counts[arm]
        self.t += 1

    def play_probability_of(self, arm: int) -> float | None:
        return None


@dataclass
class UniformAgent:
    """Plays every arm with probability 1/N regardless of feedback (reference policy)."""

    n_arms: int
    name: str = "uniform"

    def select(self, rng: np.random.Generator) -> int:
        return int(rng.integers(self.n_arms))

    def update(self, arm: int, reward: int) -> None:
        _check_arm(arm, self.n_arms)

    def play_probability_of(self, arm: int) -> float | None:
        return 1.0 / self.n_arms
