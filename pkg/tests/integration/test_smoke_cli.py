import json

from click.testing import CliRunner

from sambabandit.cli import cli


def test_integration_cli_help_runs():
    """
    Very small integration smoke test.

    Runs the real CLI entry point with --help to ensure:
      - sambabandit.cli imports correctly
      - click wiring is intact
      - help text can be generated without error
    """
    runner = CliRunner()
    result = runner.invoke(cli, ["--help"])
    assert result.exit_code == 0
    assert "Use subcommands run, sweep, fig, verify" in result.output


def test_integration_config_to_csv(tmp_path):
    """A config with every agent family runs end to end and yields one row per snapshot."""
    config = {
        "schema": 1,
        "experiments": [
            {
                "name": "all_agents",
                "instance": {"means": [0.2, 0.4, 0.7], "label": "three"},
                "agents": [
                    {"type": "thompson"},
                    {"type": "ucb1"},
                    {"type": "exp3"},
                    {"type": "gba", "alpha": 0.1},
                    {"type": "eps_greedy", "mode": "decaying"},
                    {"type": "eps_greedy", "mode": "fixed", "eps": 0.1},
                    {"type": "uniform"},
                    {"type": "fixed", "alpha": 0.1},
                    {"type": "log_cooling", "beta": 1.0},
                    {"type": "loglog_cooling", "beta": 1.0},
                    {"type": "slowly_varying", "l": "inv_log"},
                ],
                "horizon": 30,
                "replications": 2,
                "snapshots": [10, 30],
            }
        ],
    }
    path = tmp_path / "all.json"
    path.write_text(json.dumps(config), encoding="utf-8")

    result = CliRunner().invoke(
        cli, ["-v", "run", "--config", str(path), "--out", str(tmp_path / "out"), "--no-progress"]
    )
    assert result.exit_code == 0, result.output

    lines = (tmp_path / "out" / "all_agents.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == (
        "agent,instance,t,pseudo_regret_mean,pseudo_regret_se,realized_regret_mean,"
        "p_optimal_mean,p_suboptimal_play,runs"
    )
    assert len(lines) == 1 + 11 * 2
    assert all(line.endswith(",2") for line in lines[1:])
