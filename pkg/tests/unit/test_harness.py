"""Unit tests for the Monte Carlo experiment runner."""

from __future__ import annotations

import math

import numpy as np
import pandas as pd
import pytest

from sambabandit.agents import agent_spec_from_dict
from sambabandit.bandit import make_instance
from sambabandit.exceptions import ConfigError, InstanceError, PreconditionError
from sambabandit.harness import (
    METRIC_COLUMNS,
    ExperimentConfig,
    ReplicationResult,
    aggregate,
    compare_agents,
    final_rows,
    fraction_absorbed_suboptimal,
    generate_instances,
    loglog_slope,
    run_experiment,
    run_experiment_detailed,
    run_replication,
    snapshot_grid,
    summarize_final,
    validate_snapshots,
    write_metrics_csv,
)

SAMBA = agent_spec_from_dict({"type": "fixed", "alpha": 0.1, "name": "samba"})
THOMPSON = agent_spec_from_dict({"type": "thompson"})
UNIFORM = agent_spec_from_dict({"type": "uniform"})


def _config(**overrides) -> ExperimentConfig:
    base = dict(
        name="t",
        instances=(make_instance([0.1, 0.5, 0.8, 0.9], label="moderate"),),
        agents=(SAMBA, THOMPSON),
        horizon=100,
        replications=4,
        base_seed=3,
        snapshots=(1, 10, 100),
    )
    base.update(overrides)
    return ExperimentConfig(**base)


# ---------------------------------------------------------------------------
# Grids and instances
# ---------------------------------------------------------------------------


class TestSnapshotGrid:
    def test_exact_decades(self) -> None:
        assert snapshot_grid(1000, 4) == [1, 10, 100, 1000]
        assert snapshot_grid(100_000, 6) == [1, 10, 100, 1000, 10_000, 100_000]

    @pytest.mark.parametrize("n", [1, 5, 50])
    def test_single_step_horizon(self, n: int) -> None:
        assert snapshot_grid(1, n) == [1]

    def test_deduplicated_and_ends_at_horizon(self) -> None:
        grid = snapshot_grid(37, 30)
        assert grid == sorted(set(grid))
        assert grid[0] == 1 and grid[-1] == 37

    def test_invalid(self) -> None:
        with pytest.raises(ConfigError):
            snapshot_grid(0, 3)
        with pytest.raises(ConfigError):
            snapshot_grid(10, 0)

    def test_validate_explicit_list(self) -> None:
        assert validate_snapshots([10, 1, 10, 5], 10) == [1, 5, 10]
        with pytest.raises(ConfigError):
            validate_snapshots([0, 5], 10)
        with pytest.raises(ConfigError):
            validate_snapshots([11], 10)


class TestGenerateInstances:
    def test_deterministic(self) -> None:
        a = generate_instances(10, 0.0, 0.1, 5, seed=11)
        b = generate_instances(10, 0.0, 0.1, 5, seed=11)
        assert [i.means for i in a] == [i.means for i in b]
        assert [i.label for i in a] == ["u0", "u1", "u2", "u3", "u4"]

    def test_grand_mean(self) -> None:
        insts = generate_instances(10, 0.0, 0.1, 100, seed=0)
        means = np.array([i.means for i in insts])
        assert np.all((means >= 0.0) & (means <= 0.1))
        assert abs(means.mean() - 0.05) <= 3 * (0.1 / math.sqrt(12)) / math.sqrt(1000)

    @pytest.mark.parametrize("low, high", [(0.5, 0.5), (0.6, 0.2), (-0.1, 0.5), (0.0, 1.1)])
    def test_invalid_range(self, low: float, high: float) -> None:
        with pytest.raises(InstanceError):
            generate_instances(10, low, high, 3, seed=0)


class TestExperimentConfig:
    def test_default_snapshots(self) -> None:
        cfg = _config(snapshots=())
        assert cfg.snapshots == tuple(snapshot_grid(100, 20))

    @pytest.mark.parametrize(
        "overrides",
        [{"horizon": 0}, {"replications": 0}, {"instances": ()}, {"agents": ()}, {"agents": (SAMBA, SAMBA)}],
    )
    def test_invalid(self, overrides) -> None:
        with pytest.raises(ConfigError):
            _config(**overrides)


# ---------------------------------------------------------------------------
# Replications
# ---------------------------------------------------------------------------


class TestRunReplication:
    def test_equal_means_accumulate_no_pseudo_regret(self) -> None:
        inst = make_instance([0.4, 0.4, 0.4])
        for spec in (SAMBA, THOMPSON, UNIFORM):
            res = run_replication(inst, spec, 200, seed=1, snapshots=[1, 50, 200])
            np.testing.assert_array_equal(res.pseudo_regret, 0.0)
            np.testing.assert_array_equal(res.suboptimal_play, 0)

    def test_zero_horizon_rejected(self, four_arms) -> None:
        with pytest.raises(PreconditionError):
            run_replication(four_arms, SAMBA, 0, seed=1, snapshots=[1])

    def test_same_seed_same_metrics(self, four_arms) -> None:
        a = run_replication(four_arms, SAMBA, 300, seed=9, snapshots=[1, 30, 300])
        b = run_replication(four_arms, SAMBA, 300, seed=9, snapshots=[1, 30, 300])
        for field in ("pseudo_regret", "realized_regret", "suboptimal_play", "p_optimal", "final_probs"):
            np.testing.assert_array_equal(getattr(a, field), getattr(b, field))

    def test_samba_records_probabilities(self, four_arms) -> None:
        res = run_replication(four_arms, SAMBA, 500, seed=2, snapshots=[1, 100, 500], record_trajectory=True)
        assert res.p_optimal is not None
        assert np.all((res.p_optimal > 0) & (res.p_optimal < 1))
        assert res.trajectory.shape == (501,)
        assert res.trajectory[0] == pytest.approx(0.75)
        assert res.trajectory[-1] == pytest.approx(1.0 - res.p_optimal[-1])
        assert res.final_probs.sum() == pytest.approx(1.0)

    def test_thompson_has_no_probabilities(self, four_arms) -> None:
        res = run_replication(four_arms, THOMPSON, 50, seed=2, snapshots=[50], record_trajectory=True)
        assert res.p_optimal is None
        assert res.trajectory is None
        assert res.final_probs is None

    def test_pseudo_regret_non_decreasing(self, four_arms) -> None:
        res = run_replication(four_arms, UNIFORM, 400, seed=4, snapshots=snapshot_grid(400, 12))
        assert np.all(np.diff(res.pseudo_regret) >= 0)


# ---------------------------------------------------------------------------
# Experiments and aggregation
# ---------------------------------------------------------------------------


class TestRunExperiment:
    def test_table_shape_and_columns(self) -> None:
        table = run_experiment(_config(), progress=False)
        assert list(table.columns[: len(METRIC_COLUMNS)]) == METRIC_COLUMNS
        assert len(table) == 2 * 1 * 3
        assert set(table["runs"]) == {4}
        assert (table["pseudo_regret_se"] >= 0).all()
        assert table["p_suboptimal_play"].between(0, 1).all()

    def test_thompson_p_optimal_is_nan(self) -> None:
        table = run_experiment(_config(), progress=False)
        assert table.loc[table["agent"] == "thompson", "p_optimal_mean"].isna().all()
        assert table.loc[table["agent"] == "samba", "p_optimal_mean"].notna().all()

    def test_single_replication_has_zero_stderr(self, four_arms) -> None:
        cfg = _config(replications=1, agents=(SAMBA,))
        run = run_experiment_detailed(cfg, progress=False)
        res = run.replications_for("samba")[0]
        np.testing.assert_array_equal(run.table["pseudo_regret_mean"], res.pseudo_regret)
        assert (run.table["pseudo_regret_se"] == 0).all()

    def test_doubling_replications_keeps_prefix(self) -> None:
        small = run_experiment_detailed(_config(replications=3), progress=False)
        large = run_experiment_detailed(_config(replications=6), progress=False)
        for r_small, r_large in zip(small.replications_for("samba"), large.replications_for("samba")):
            np.testing.assert_array_equal(r_small.pseudo_regret, r_large.pseudo_regret)

    def test_parallel_matches_serial(self) -> None:
        serial = run_experiment(_config(), jobs=1, progress=False)
        parallel = run_experiment(_config(), jobs=2, progress=False)
        pd.testing.assert_frame_equal(serial, parallel)

    def test_aggregation_ignores_completion_order(self) -> None:
        cfg = _config()
        run = run_experiment_detailed(cfg, progress=False)
        shuffled = {key: list(reversed(runs)) for key, runs in run.results.items()}
        # means are order-free; the standard error only depends on the multiset as well
        again = aggregate(cfg, shuffled)
        pd.testing.assert_frame_equal(run.table, again, check_exact=False, rtol=1e-12)

    def test_uniform_agent_expected_regret(self) -> None:
        """Uniform play on (0.1, 0.5, 0.8, 0.9) for T=1000 accumulates 325 in expectation."""
        cfg = _config(agents=(UNIFORM,), horizon=1000, replications=300, snapshots=(1000,))
        row = run_experiment(cfg, progress=False).iloc[-1]
        assert abs(row["pseudo_regret_mean"] - 325.0) <= 3 * row["pseudo_regret_se"]

    def test_p_suboptimal_play_is_count_fraction(self) -> None:
        cfg = _config(agents=(UNIFORM,), replications=8)
        run = run_experiment_detailed(cfg, progress=False)
        counts = np.stack([r.suboptimal_play for r in run.replications_for("uniform")]).sum(axis=0)
        np.testing.assert_array_equal(run.table["p_suboptimal_play"].to_numpy(), counts / 8)

    def test_unknown_agent_lookup(self) -> None:
        run = run_experiment_detailed(_config(replications=1), progress=False)
        with pytest.raises(KeyError):
            run.replications_for("nope")


class TestOutputs:
    def test_write_metrics_csv_header_and_format(self, tmp_path) -> None:
        table = run_experiment(_config(), progress=False)
        path = tmp_path / "out.csv"
        write_metrics_csv(table, path)
        raw = path.read_bytes()
        assert b"\r\n" not in raw
        header = raw.decode("utf-8").splitlines()[0]
        assert header == ",".join(METRIC_COLUMNS)

    def test_write_metrics_csv_extra_columns(self, tmp_path) -> None:
        table = run_experiment(_config(), progress=False)
        path = tmp_path / "out.csv"
        write_metrics_csv(table, path, extra_columns=["mean_reward"])
        assert path.read_text().splitlines()[0].endswith(",mean_reward")

    def test_write_metrics_csv_missing_columns(self, tmp_path) -> None:
        with pytest.raises(KeyError):
            write_metrics_csv(pd.DataFrame({"agent": ["a"]}), tmp_path / "x.csv")

    def test_final_rows_and_summary(self) -> None:
        table = run_experiment(_config(), progress=False)
        last = final_rows(table)
        assert list(last["t"]) == [100, 100]
        summary = summarize_final(table)
        assert list(summary["agent"]) == ["samba", "thompson"]
        assert set(summary.columns) >= {"pseudo_regret_mean", "pseudo_regret_se", "mean_reward"}


class TestComparisons:
    def _table(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "agent": ["a", "a", "b", "b"],
                "instance": ["i"] * 4,
                "t": [10, 100, 10, 100],
                "pseudo_regret_mean": [1.0, 5.0, 2.0, 9.0],
                "pseudo_regret_se": [0.1, 1.0, 0.1, 1.0],
            }
        )

    def test_compare_agents(self) -> None:
        cmp = compare_agents(self._table(), "a", "b")
        assert cmp.difference == -4.0
        assert cmp.pooled_se == pytest.approx(math.sqrt(2.0))
        assert cmp.separated(2.0)
        assert not cmp.separated(3.0)

    def test_compare_unknown_agent(self) -> None:
        with pytest.raises(KeyError):
            compare_agents(self._table(), "a", "zzz")

    def test_fraction_absorbed(self, four_arms) -> None:
        def result(probs):
            return ReplicationResult(
                snapshots=np.array([1]),
                pseudo_regret=np.zeros(1),
                realized_regret=np.zeros(1),
                suboptimal_play=np.zeros(1, dtype=np.int8),
                final_probs=np.asarray(probs),
            )

        runs = [result([0.001, 0.995, 0.002, 0.002]), result([0.0, 0.0, 0.0, 1.0])] * 2
        assert fraction_absorbed_suboptimal(runs, four_arms) == 0.5

    def test_fraction_absorbed_needs_probabilities(self, four_arms) -> None:
        empty = ReplicationResult(np.array([1]), np.zeros(1), np.zeros(1), np.zeros(1, dtype=np.int8))
        with pytest.raises(PreconditionError):
            fraction_absorbed_suboptimal([empty], four_arms)

    def test_loglog_slope(self) -> None:
        t = np.array([1e3, 1e4, 1e5])
        assert loglog_slope(t, 100.0 / t) == pytest.approx(-1.0)
        assert loglog_slope(t, 5.0 * t**0.5, t_min=1e4) == pytest.approx(0.5)

    def test_loglog_slope_needs_two_points(self) -> None:
        with pytest.raises(PreconditionError):
            loglog_slope([1.0, 10.0], [1.0, 2.0], t_min=5.0)
