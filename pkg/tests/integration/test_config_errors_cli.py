"""Malformed config values end as a usage error (exit 2) naming the offending key."""

import json

import pytest
from click.testing import CliRunner

from sambabandit.cli import cli

SAMBA = {"type": "fixed", "alpha": 0.1}


def _config(agents, **source):
    experiment = {
        "name": "e",
        "agents": agents,
        "horizon": 20,
        "replications": 1,
        "snapshots": [20],
    }
    experiment.update(source or {"instance": {"means": [0.2, 0.8]}})
    return {"schema": 1, "experiments": [experiment]}


@pytest.mark.parametrize(
    ("config", "key"),
    [
        (_config([{"type": "gba", "alpha": "fast"}]), "experiments[0].agents[0].alpha"),
        (_config([{"type": "eps_greedy", "mode": "fixed", "eps": "x"}]), "experiments[0].agents[0].eps"),
        (_config([{"type": "samba", "schedule": SAMBA, "floor": "x"}]), "experiments[0].agents[0].floor"),
        (
            _config([{"type": "samba", "schedule": SAMBA, "initial": [0.9, 0.9]}]),
            "experiments[0].agents[0].initial",
        ),
        (
            _config([{"type": "samba", "schedule": SAMBA, "initial": ["a", 0.5]}]),
            "experiments[0].agents[0].initial",
        ),
        (
            _config([SAMBA], generator={"n_arms": 3, "n_instances": 2, "low": "zero"}),
            "experiments[0].generator.low",
        ),
        (
            _config([SAMBA], generator={"n_arms": 3, "n_instances": 2, "high": [1]}),
            "experiments[0].generator.high",
        ),
    ],
    ids=["gba-alpha", "eps", "floor", "initial-sum", "initial-type", "generator-low", "generator-high"],
)
def test_run_rejects_malformed_value(tmp_path, config, key):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(config), encoding="utf-8")

    result = CliRunner().invoke(cli, ["run", "--config", str(path), "--out", str(tmp_path / "out")])

    assert result.exit_code == 2, result.output
    assert "configuration error" in result.output
    assert key in result.output
    assert not (tmp_path / "out").exists()


def test_fig_seed_beyond_64_bits_is_usage_error(tmp_path):
    result = CliRunner().invoke(
        cli, ["fig", "fig5", "--out", str(tmp_path), "--scale", "0.01", "--seed", str(2**64)]
    )
    assert result.exit_code == 2
    assert "--seed" in result.output
