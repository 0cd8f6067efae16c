"""
Agent specifications as they appear in experiment configs, and the factory
that turns a spec into a fresh agent for one replication.

Accepted forms::

    {"type": "thompson"}
    {"type": "ucb1"}
    {"type": "exp3"}
    {"type": "gba", "alpha": 0.1}
    {"type": "eps_greedy", "mode": "decaying"}
    {"type": "eps_greedy", "mode": "fixed", "eps": 0.1}
    {"type": "uniform"}
    {"type": "samba", "schedule": {"type": "fixed", "alpha": 0.1}, "floor": 0.0}

A bare schedule object (``{"type": "fixed", "alpha": 0.1}``) is shorthand for
a SAMBA agent with that schedule. Any spec may carry a ``"name"``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Protocol

import numpy as np

from .bandit import validate_probs
from .baselines import EpsGreedyAgent, Exp3Agent, GbaAgent, ThompsonAgent, Ucb1Agent, UniformAgent
from .exceptions import ConfigError, InstanceError
from .samba import SambaAgent
from .schedules import Schedule, schedule_from_dict

SCHEDULE_TYPES = ("fixed", "log_cooling", "loglog_cooling", "slowly_varying")
BASELINE_TYPES = ("thompson", "ucb1", "exp3", "gba", "eps_greedy", "uniform")


class Agent(Protocol):
    name: str

    def select(self, rng: np.random.Generator) -> int: ...

    def update(self, arm: int, reward: int) -> None: ...

    def play_probability_of(self, arm: int) -> float | None: ...


@dataclass(frozen=True)
class AgentSpec:
    kind: str
    name: str
    params: Mapping[str, Any] = field(default_factory=dict)
    schedule: Schedule | None = None

    @property
    def is_samba(self) -> bool:
        return self.kind == "samba"

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"type": self.kind, "name": self.name, **self.params}
        if self.schedule is not None:
            out["schedule"] = self.schedule.to_dict()
        return out


def _default_name(kind: str, params: Mapping[str, Any], schedule: Schedule | None) -> str:
    if schedule is not None:
        return schedule.label
    if kind == "gba":
        return f"gba(alpha={params['alpha']:g})"
    if kind == "eps_greedy":
        return "eps-greedy(decaying)" if params["mode"] == "decaying" else f"eps-greedy({params['eps']:g})"
    return kind


def float_field(data: Mapping[str, Any], name: str, key: str, default: float) -> float:
    """A numeric config entry as float; anything else is a ConfigError naming ``key.name``."""
    value = data.get(name, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"must be a number, got {value!r}", f"{key}.{name}")
    if not math.isfinite(value):
        raise ConfigError(f"must be finite, got {value!r}", f"{key}.{name}")
    return float(value)


def _initial_probs(value: Any, key: str) -> tuple[float, ...]:
    numbers = isinstance(value, list) and all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in value
    )
    if not numbers:
        raise ConfigError("initial must be a list of numbers", key)
    try:
        return tuple(float(x) for x in validate_probs(value))
    except InstanceError as exc:
        raise ConfigError(str(exc), key) from None


def agent_spec_from_dict(data: Mapping[str, Any], key: str = "agent") -> AgentSpec:
    """Validate and parse one agent spec."""
    if not isinstance(data, Mapping):
        raise ConfigError("agent spec must be a JSON object", key)
    kind = data.get("type")
    params: dict[str, Any] = {}
    schedule: Schedule | None = None

    if kind in SCHEDULE_TYPES:
        schedule = schedule_from_dict(data, key)
        kind = "samba"
    elif kind == "samba":
        if "schedule" not in data:
            raise ConfigError("samba agent needs a 'schedule'", f"{key}.schedule")
        schedule = schedule_from_dict(data["schedule"], f"{key}.schedule")
        params["floor"] = float_field(data, "floor", key, 0.0)
        if params["floor"] < 0:
            raise ConfigError("floor must be >= 0", f"{key}.floor")
        if "initial" in data:
            params["initial"] = _initial_probs(data["initial"], f"{key}.initial")
    elif kind == "gba":
        params["alpha"] = float_field(data, "alpha", key, 0.1)
        if params["alpha"] <= 0:
            raise ConfigError("gba alpha must be positive", f"{key}.alpha")
    elif kind == "eps_greedy":
        mode = data.get("mode", "decaying")
        if mode not in ("fixed", "decaying"):
            raise ConfigError(f"unknown mode {mode!r}", f"{key}.mode")
        params["mode"] = mode
        params["eps"] = float_field(data, "eps", key, 0.1)
        if mode == "fixed" and not (0.0 <= params["eps"] <= 1.0):
            raise ConfigError("eps must lie in [0, 1]", f"{key}.eps")
    elif kind not in BASELINE_TYPES:
        raise ConfigError(f"unknown agent type {kind!r}", f"{key}.type")

    name = str(data.get("name") or _default_name(kind, params, schedule))
    return AgentSpec(kind=kind, name=name, params=params, schedule=schedule)


def build_agent(spec: AgentSpec, n_arms: int) -> Agent:
    """A fresh agent for one replication on an ``n_arms`` instance."""
    p = spec.params
    if spec.kind == "samba":
        assert spec.schedule is not None
        return SambaAgent.create(
            spec.schedule, n_arms, initial=p.get("initial"), floor=p.get("floor", 0.0), name=spec.name
        )
    if spec.kind == "thompson":
        return ThompsonAgent(n_arms, name=spec.name)
    if spec.kind == "ucb1":
        return Ucb1Agent(n_arms, name=spec.name)
    if spec.kind == "exp3":
        return Exp3Agent(n_arms, name=spec.name)
    if spec.kind == "gba":
        return GbaAgent(n_arms, alpha=p["alpha"], name=spec.name)
    if spec.kind == "eps_greedy":
        return EpsGreedyAgent(n_arms, mode=p["mode"], eps=p["eps"], name=spec.name)
    if spec.kind == "uniform":
        return UniformAgent(n_arms, name=spec.name)
    raise ConfigError(f"unknown agent type {spec.kind!r}", "type")
