import os

import pytest

from sambabandit.agents import agent_spec_from_dict
from sambabandit.bandit import make_instance
from sambabandit.harness import ExperimentConfig


@pytest.fixture()
def experiment():
    """Build an ExperimentConfig from plain means and agent dicts."""

    def _build(name, means, agents, horizon, replications, snapshots, seed=2024, trajectory=False):
        return ExperimentConfig(
            name=name,
            instances=(make_instance(means, label=name),),
            agents=tuple(agent_spec_from_dict(a, f"agents[{i}]") for i, a in enumerate(agents)),
            horizon=horizon,
            replications=replications,
            base_seed=seed,
            snapshots=tuple(snapshots),
            record_trajectory=trajectory,
        )

    return _build


@pytest.fixture()
def full_jobs() -> int:
    return os.cpu_count() or 1
