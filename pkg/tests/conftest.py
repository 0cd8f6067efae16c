import json

import numpy as np
import pytest

from sambabandit.bandit import make_instance
from sambabandit.schedules import (
    FixedSchedule,
    LogCoolingSchedule,
    LogLogCoolingSchedule,
    SlowlyVaryingSchedule,
)

NINE_ARMS = tuple(round(0.1 * k, 1) for k in range(1, 10))


@pytest.fixture(autouse=True)
def _no_jobs_env(monkeypatch):
    """Keep a developer's SAMBA_JOBS from leaking into CLI tests."""
    monkeypatch.delenv("SAMBA_JOBS", raising=False)


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(12345))


@pytest.fixture()
def four_arms():
    return make_instance([0.1, 0.5, 0.8, 0.9], label="moderate")


@pytest.fixture()
def nine_arms():
    return make_instance(NINE_ARMS, label="nine-arms")


@pytest.fixture(
    params=[
        FixedSchedule(alpha=0.1),
        FixedSchedule(alpha=0.9),
        LogCoolingSchedule(beta=1.0),
        LogLogCoolingSchedule(beta=0.5),
    ],
    ids=lambda s: s.label,
)
def closed_form_schedule(request):
    return request.param


@pytest.fixture()
def slowly_varying_schedule():
    return SlowlyVaryingSchedule(l="inv_loglog")


@pytest.fixture()
def write_config(tmp_path):
    """Write a config dict as JSON and return its path."""

    def _write(data, name: str = "config.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return _write


@pytest.fixture()
def small_config() -> dict:
    return {
        "schema": 1,
        "experiments": [
            {
                "name": "four_arms",
                "instance": {"means": [0.1, 0.5, 0.8, 0.9], "label": "moderate"},
                "agents": [
                    {"type": "thompson"},
                    {"type": "fixed", "alpha": 0.1, "name": "samba"},
                ],
                "horizon": 50,
                "replications": 3,
                "seed": 7,
                "snapshots": [1, 10, 50],
            }
        ],
    }
