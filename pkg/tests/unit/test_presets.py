import pytest

from sambabandit.exceptions import ConfigError
from sambabandit.presets import (
    COMPARISON_AGENTS,
    FIG2_BETAS,
    NINE_ARMS,
    PRESETS,
    get_preset,
)


def test_known_presets():
    assert sorted(PRESETS) == ["fig1", "fig2", "fig3", "fig4", "fig5"]
    assert PRESETS["fig1"].reference_curve
    assert not PRESETS["fig3"].reference_curve


def test_unknown_preset():
    with pytest.raises(ConfigError, match="unknown preset"):
        get_preset("fig9")


@pytest.mark.parametrize("scale", [0.0, -0.5, 1.5])
def test_scale_out_of_range(scale):
    with pytest.raises(ConfigError) as excinfo:
        get_preset("fig3").experiments(scale=scale)
    assert excinfo.value.key == "scale"


class TestFig1Fig2:
    def test_fig1_layout(self) -> None:
        (cfg,) = get_preset("fig1").experiments(scale=0.01, seed=3)
        assert cfg.instances[0].means == NINE_ARMS
        assert cfg.horizon == 100_000
        assert cfg.replications == 20
        assert cfg.base_seed == 3
        assert [a.schedule.alpha for a in cfg.agents] == [0.5, 0.1, 0.01, 0.001]
        assert cfg.snapshots[0] == 1 and cfg.snapshots[-1] == 100_000

    def test_fig2_betas(self) -> None:
        (cfg,) = get_preset("fig2").experiments(scale=0.001)
        assert cfg.replications == 2
        assert tuple(a.schedule.beta for a in cfg.agents) == FIG2_BETAS


class TestComparisons:
    @pytest.mark.parametrize(
        "name, means", [("fig3", (0.1, 0.5, 0.8, 0.9)), ("fig4", (0.01, 0.05, 0.08, 0.09))]
    )
    def test_eight_agents(self, name, means) -> None:
        (cfg,) = get_preset(name).experiments()
        assert len(cfg.agents) == len(COMPARISON_AGENTS) == 8
        assert cfg.instances[0].means == means
        assert cfg.horizon == 1000
        assert cfg.replications == 1000
        names = [a.name for a in cfg.agents]
        assert len(set(names)) == 8
        assert "thompson" in names and "samba" in names

    def test_replications_round_up(self) -> None:
        (cfg,) = get_preset("fig3").experiments(scale=0.0001)
        assert cfg.replications == 1


class TestFig5:
    def test_arm_counts_and_labels(self) -> None:
        experiments = get_preset("fig5").experiments(scale=0.02, seed=11)
        assert [e.name for e in experiments] == [f"fig5_N{n}" for n in range(10, 101, 10)]
        first = experiments[0]
        assert len(first.instances) == 2
        assert [i.label for i in first.instances] == ["N10-u0", "N10-u1"]
        assert all(i.n_arms == 10 for i in first.instances)
        assert all(0.0 <= m <= 0.1 for i in first.instances for m in i.means)
        assert first.replications == 1
        assert first.snapshots == (100_000,)

    def test_instances_depend_on_seed(self) -> None:
        a = get_preset("fig5").experiments(scale=0.01, seed=1)[0].instances[0].means
        b = get_preset("fig5").experiments(scale=0.01, seed=1)[0].instances[0].means
        c = get_preset("fig5").experiments(scale=0.01, seed=2)[0].instances[0].means
        assert a == b
        assert a != c
