"""
Experiment configuration files.

A config is a JSON object with a schema version and a list of experiments::

    {
      "schema": 1,
      "experiments": [
        {
          "name": "four_arms",
          "instance": {"means": [0.1, 0.5, 0.8, 0.9]},
          "agents": [{"type": "thompson"}, {"type": "fixed", "alpha": 0.1}],
          "horizon": 1000,
          "replications": 200,
          "seed": 7,
          "snapshots": 20
        }
      ]
    }

Instances come from exactly one of ``"instance"`` (one means list),
``"instances"`` (a list of them) or ``"generator"`` (``n_arms``, ``low``,
``high``, ``n_instances`` and an optional ``seed``). ``"snapshots"`` is a
point count for a log-spaced grid or an explicit list of times. An
experiment may carry ``"sweep": {"agent": {...}, "param": "alpha",
"values": [...]}``, which appends one agent per value.
"""

from __future__ import annotations

import copy
import json
import logging
import os
from typing import Any, Mapping, Sequence

from .agents import AgentSpec, agent_spec_from_dict, float_field
from .bandit import BanditInstance, make_instance
from .exceptions import ConfigError, InstanceError, PreconditionError
from .harness import ExperimentConfig, generate_instances, snapshot_grid, validate_snapshots
from .rng import SEED_MAX
from .samba import alpha_threshold
from .schedules import FixedSchedule

_logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
DEFAULT_SNAPSHOTS = 20


def load_config(path: str | os.PathLike, seed: int | None = None) -> list[ExperimentConfig]:
    """Read and validate a config file; ``seed`` overrides every experiment's base seed."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_config(data, seed=seed)


def parse_config(data: Any, seed: int | None = None) -> list[ExperimentConfig]:
    if not isinstance(data, Mapping):
        raise ConfigError("top level must be a JSON object")
    if data.get("schema") != SCHEMA_VERSION:
        raise ConfigError(
            f"unsupported schema {data.get('schema')!r}, expected {SCHEMA_VERSION}", "schema"
        )
    experiments = data.get("experiments")
    if not isinstance(experiments, list) or not experiments:
        raise ConfigError("must be a non-empty list", "experiments")

    out = [
        experiment_from_dict(exp, key=f"experiments[{i}]", seed=seed)
        for i, exp in enumerate(experiments)
    ]
    names = [e.name for e in out]
    if len(set(names)) != len(names):
        raise ConfigError(f"experiment names must be unique, got {names}", "experiments")
    return out


def _int_field(data: Mapping[str, Any], name: str, key: str, default: int | None = None) -> int:
    value = data.get(name, default)
    if value is None:
        raise ConfigError("missing required field", f"{key}.{name}")
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
        raise ConfigError(f"must be an integer, got {value!r}", f"{key}.{name}")
    return int(value)


def _check_seed(value: int, key: str) -> int:
    if not 0 <= value <= SEED_MAX:
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {value}", key)
    return value


def _instances(data: Mapping[str, Any], key: str, base_seed: int) -> list[BanditInstance]:
    sources = [k for k in ("instance", "instances", "generator") if k in data]
    if len(sources) != 1:
        raise ConfigError("exactly one of 'instance', 'instances', 'generator' is required", key)
    source = sources[0]
    try:
        if source == "instance":
            return [_one_instance(data["instance"], f"{key}.instance")]
        if source == "instances":
            items = data["instances"]
            if not isinstance(items, list) or not items:
                raise ConfigError("must be a non-empty list", f"{key}.instances")
            return [_one_instance(item, f"{key}.instances[{i}]") for i, item in enumerate(items)]
        gen = data["generator"]
        gkey = f"{key}.generator"
        if not isinstance(gen, Mapping):
            raise ConfigError("must be a JSON object", gkey)
        return generate_instances(
            n_arms=_int_field(gen, "n_arms", gkey),
            low=float_field(gen, "low", gkey, 0.0),
            high=float_field(gen, "high", gkey, 1.0),
            n_instances=_int_field(gen, "n_instances", gkey),
            seed=_check_seed(_int_field(gen, "seed", gkey, base_seed), f"{gkey}.seed"),
        )
    except InstanceError as exc:
        raise ConfigError(str(exc), f"{key}.{source}") from None


def _one_instance(item: Any, key: str) -> BanditInstance:
    if isinstance(item, Mapping):
        means, label = item.get("means"), str(item.get("label", ""))
    else:
        means, label = item, ""
    if not isinstance(means, list):
        raise ConfigError("means must be a list of numbers", key)
    try:
        return make_instance(means, label=label)
    except (InstanceError, TypeError, ValueError) as exc:
        raise ConfigError(str(exc), key) from None


def _set_param(agent: dict[str, Any], param: str, value: Any) -> None:
    if agent.get("type") == "samba" and param != "floor":
        agent.setdefault("schedule", {})[param] = value
    else:
        agent[param] = value


def expand_sweep(sweep: Mapping[str, Any], key: str) -> list[dict[str, Any]]:
    """One agent dict per swept value."""
    if not isinstance(sweep, Mapping):
        raise ConfigError("must be a JSON object", key)
    for field_name in ("agent", "param", "values"):
        if field_name not in sweep:
            raise ConfigError("missing required field", f"{key}.{field_name}")
    values = sweep["values"]
    if not isinstance(values, list) or not values:
        raise ConfigError("must be a non-empty list", f"{key}.values")
    base = sweep["agent"]
    if not isinstance(base, Mapping):
        raise ConfigError("must be a JSON object", f"{key}.agent")
    param = str(sweep["param"])

    agents = []
    for value in values:
        agent = copy.deepcopy(dict(base))
        _set_param(agent, param, value)
        if "name" in base:
            label = f"{value:g}" if isinstance(value, (int, float)) else str(value)
            agent["name"] = f"{base['name']}[{param}={label}]"
        agents.append(agent)
    return agents


def _warn_inadmissible(
    agents: Sequence[AgentSpec], instances: Sequence[BanditInstance], key: str
) -> None:
    for spec in agents:
        if not isinstance(spec.schedule, FixedSchedule):
            continue
        for inst in instances:
            if inst.degenerate or inst.min_gap is None:
                continue
            try:
                bound = alpha_threshold(inst.optimal_mean, inst.min_gap)
            except PreconditionError:
                continue
            if spec.schedule.alpha >= bound:
                _logger.warning(
                    "%s: agent %s uses alpha=%g above the admissibility threshold %.6g "
                    "for instance %s; convergence to the optimal arm is not guaranteed",
                    key,
                    spec.name,
                    spec.schedule.alpha,
                    bound,
                    inst.label or "?",
                )


def experiment_from_dict(
    data: Any, key: str = "experiments[0]", seed: int | None = None
) -> ExperimentConfig:
    if not isinstance(data, Mapping):
        raise ConfigError("experiment must be a JSON object", key)
    name = data.get("name")
    if not isinstance(name, str) or not name:
        raise ConfigError("experiment needs a non-empty string name", f"{key}.name")
    if os.sep in name or (os.altsep and os.altsep in name):
        raise ConfigError("experiment name must not contain path separators", f"{key}.name")

    base_seed = seed if seed is not None else _int_field(data, "seed", key, 0)
    base_seed = _check_seed(base_seed, f"{key}.seed")
    horizon = _int_field(data, "horizon", key)
    replications = _int_field(data, "replications", key, 1)
    if horizon < 1:
        raise ConfigError(f"must be >= 1, got {horizon}", f"{key}.horizon")
    if replications < 1:
        raise ConfigError(f"must be >= 1, got {replications}", f"{key}.replications")

    instances = _instances(data, key, base_seed)

    raw_agents = data.get("agents", [])
    if not isinstance(raw_agents, list):
        raise ConfigError("must be a list", f"{key}.agents")
    agent_keys = [f"{key}.agents[{i}]" for i in range(len(raw_agents))]
    agents = [agent_spec_from_dict(a, k) for a, k in zip(raw_agents, agent_keys)]
    if "sweep" in data:
        swept = expand_sweep(data["sweep"], f"{key}.sweep")
        swept_keys = [f"{key}.sweep.values[{i}]" for i in range(len(swept))]
        agents += [agent_spec_from_dict(a, k) for a, k in zip(swept, swept_keys)]
        agent_keys += swept_keys
    if not agents:
        raise ConfigError("no agents configured", f"{key}.agents")
    for spec, agent_key in zip(agents, agent_keys):
        initial = spec.params.get("initial")
        for inst in instances:
            if initial is not None and len(initial) != inst.n_arms:
                raise ConfigError(
                    f"agent {spec.name}: initial has {len(initial)} entries "
                    f"but the instance has {inst.n_arms} arms",
                    f"{agent_key}.initial",
                )

    snaps = data.get("snapshots", DEFAULT_SNAPSHOTS)
    try:
        if isinstance(snaps, list):
            snapshots = validate_snapshots(snaps, horizon)
        else:
            snapshots = snapshot_grid(horizon, _int_field(data, "snapshots", key, DEFAULT_SNAPSHOTS))
    except ConfigError as exc:
        raise ConfigError(exc.message, f"{key}.snapshots") from None

    _warn_inadmissible(agents, instances, key)
    try:
        return ExperimentConfig(
            name=name,
            instances=tuple(instances),
            agents=tuple(agents),
            horizon=horizon,
            replications=replications,
            base_seed=base_seed,
            snapshots=tuple(snapshots),
            record_trajectory=bool(data.get("record_trajectory", False)),
        )
    except ConfigError as exc:
        raise ConfigError(exc.message, f"{key}.{exc.key}" if exc.key else key) from None
