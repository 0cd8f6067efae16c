"""
Built-in simulation presets ``fig1`` .. ``fig5``.

``scale`` in (0, 1] multiplies replication counts (and, for fig5, the number
of generated instances); the horizon and arm layouts are fixed.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Callable

from .agents import AgentSpec, agent_spec_from_dict
from .bandit import make_instance
from .exceptions import ConfigError
from .harness import ExperimentConfig, generate_instances, snapshot_grid
from .rng import derive_seed

_logger = logging.getLogger(__name__)

NINE_ARMS = tuple(round(0.1 * k, 1) for k in range(1, 10))
MODERATE_ARMS = (0.1, 0.5, 0.8, 0.9)
SMALL_ARMS = (0.01, 0.05, 0.08, 0.09)

FIG1_ALPHAS = (0.5, 0.1, 0.01, 0.001)
FIG2_BETAS = (0.01, 0.1, 0.5, 1.0)
FIG5_ARM_COUNTS = tuple(range(10, 101, 10))

REFERENCE_COLUMN = "reference_100_over_t"

COMPARISON_AGENTS: tuple[dict, ...] = (
    {"type": "thompson", "name": "thompson"},
    {"type": "ucb1", "name": "ucb1"},
    {"type": "exp3", "name": "exp3"},
    {"type": "gba", "alpha": 0.1, "name": "gba"},
    {"type": "eps_greedy", "mode": "decaying", "name": "eps-greedy-decaying"},
    {"type": "eps_greedy", "mode": "fixed", "eps": 0.1, "name": "eps-greedy-0.1"},
    {"type": "fixed", "alpha": 0.1, "name": "samba"},
    {"type": "log_cooling", "beta": 1.0, "name": "samba-cooling"},
)


def _agents(items) -> tuple[AgentSpec, ...]:
    return tuple(agent_spec_from_dict(a, f"preset.agents[{i}]") for i, a in enumerate(items))


def _runs(base: int, scale: float) -> int:
    return max(1, math.ceil(base * scale))


def _fig1(scale: float, seed: int) -> list[ExperimentConfig]:
    agents = _agents({"type": "fixed", "alpha": a, "name": f"samba-alpha-{a:g}"} for a in FIG1_ALPHAS)
    return [
        ExperimentConfig(
            name="fig1",
            instances=(make_instance(NINE_ARMS, label="nine-arms"),),
            agents=agents,
            horizon=100_000,
            replications=_runs(2000, scale),
            base_seed=seed,
            snapshots=tuple(snapshot_grid(100_000, 26)),
        )
    ]


def _fig2(scale: float, seed: int) -> list[ExperimentConfig]:
    agents = _agents(
        {"type": "log_cooling", "beta": b, "name": f"samba-cooling-beta-{b:g}"} for b in FIG2_BETAS
    )
    return [
        ExperimentConfig(
            name="fig2",
            instances=(make_instance(NINE_ARMS, label="nine-arms"),),
            agents=agents,
            horizon=100_000,
            replications=_runs(2000, scale),
            base_seed=seed,
            snapshots=tuple(snapshot_grid(100_000, 26)),
        )
    ]


def _comparison(name: str, means: tuple[float, ...], label: str):
    def build(scale: float, seed: int) -> list[ExperimentConfig]:
        return [
            ExperimentConfig(
                name=name,
                instances=(make_instance(means, label=label),),
                agents=_agents(COMPARISON_AGENTS),
                horizon=1000,
                replications=_runs(1000, scale),
                base_seed=seed,
                snapshots=tuple(snapshot_grid(1000, 16)),
            )
        ]

    return build


def _fig5(scale: float, seed: int) -> list[ExperimentConfig]:
    n_instances = _runs(100, scale)
    experiments = []
    for n_arms in FIG5_ARM_COUNTS:
        generated = generate_instances(n_arms, 0.0, 0.1, n_instances, seed=derive_seed(seed, n_arms))
        instances = tuple(
            dataclasses.replace(inst, label=f"N{n_arms}-{inst.label}") for inst in generated
        )
        experiments.append(
            ExperimentConfig(
                name=f"fig5_N{n_arms}",
                instances=instances,
                agents=_agents(COMPARISON_AGENTS),
                horizon=100_000,
                replications=1,
                base_seed=seed,
                snapshots=(100_000,),
            )
        )
    return experiments


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    build: Callable[[float, int], list[ExperimentConfig]]
    reference_curve: bool = False

    def experiments(self, scale: float = 1.0, seed: int = 0) -> list[ExperimentConfig]:
        if not (0.0 < scale <= 1.0):
            raise ConfigError(f"scale must lie in (0, 1], got {scale!r}", "scale")
        out = self.build(scale, seed)
        _logger.info("Preset %s at scale %g: %d experiment(s)", self.name, scale, len(out))
        return out


PRESETS: dict[str, Preset] = {
    "fig1": Preset("fig1", "SAMBA fixed alpha on nine arms 0.1..0.9", _fig1, reference_curve=True),
    "fig2": Preset("fig2", "SAMBA log cooling beta grid on nine arms", _fig2, reference_curve=True),
    "fig3": Preset(
        "fig3", "eight agents on arms (0.1, 0.5, 0.8, 0.9)", _comparison("fig3", MODERATE_ARMS, "moderate")
    ),
    "fig4": Preset(
        "fig4", "eight agents on arms (0.01, 0.05, 0.08, 0.09)", _comparison("fig4", SMALL_ARMS, "small")
    ),
    "fig5": Preset("fig5", "eight agents on 10..100 arms with means U[0, 0.1]", _fig5),
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r} (known: {', '.join(PRESETS)})", "name") from None
