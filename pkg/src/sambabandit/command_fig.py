"""CLI command: run a built-in preset and emit plot-ready data."""

from __future__ import annotations

import logging
import re
from pathlib import Path

import click
import numpy as np
import pandas as pd

from .exceptions import ConfigError
from .harness import (
    CSV_FLOAT_FORMAT,
    METRIC_COLUMNS,
    final_rows,
    run_experiment,
    write_metrics_csv,
)
from .options import (
    config_failure,
    jobs_option,
    out_option,
    prepare_out_dir,
    progress_option,
    seed_option,
)
from .presets import PRESETS, REFERENCE_COLUMN, get_preset
from .progress import ProgressReporter

_logger = logging.getLogger(__name__)

_UNSAFE = re.compile(r"[^A-Za-z0-9._-]+")


def _safe(name: str) -> str:
    return _UNSAFE.sub("_", name).strip("_") or "agent"


def write_dat(path: Path, x, y) -> None:
    """Two-column whitespace-separated file readable by gnuplot."""
    frame = pd.DataFrame({"x": np.asarray(x), "y": np.asarray(y)})
    frame.to_csv(
        path,
        sep=" ",
        header=False,
        index=False,
        float_format=CSV_FLOAT_FORMAT,
        encoding="utf-8",
        lineterminator="\n",
    )


def fig5_summary(table: pd.DataFrame) -> pd.DataFrame:
    """Mean final reward per (agent, number of arms), averaged over generated instances."""
    last = final_rows(table)
    last = last.assign(n_arms=last["instance"].str.extract(r"^N(\d+)-", expand=False).astype(int))
    grouped = last.groupby(["agent", "n_arms"], sort=False)["mean_reward"]
    out = grouped.agg(mean_reward="mean", mean_reward_se="sem", instances="count").reset_index()
    out["mean_reward_se"] = out["mean_reward_se"].fillna(0.0)
    return out.sort_values(["agent", "n_arms"], kind="stable").reset_index(drop=True)


def _write_csv(frame: pd.DataFrame, path: Path) -> None:
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n", encoding="utf-8")


@click.command("fig")
@click.argument("name", type=click.Choice(sorted(PRESETS)))
@out_option()
@click.option(
    "--scale",
    type=float,
    default=1.0,
    show_default=True,
    help="Multiplier in (0, 1] on replication and instance counts.",
)
@seed_option
@jobs_option
@progress_option
def fig_cmd(
    name: str, out_dir: Path, scale: float, seed: int | None, jobs: int, no_progress: bool
) -> None:
    """Run preset NAME (fig1..fig5) and write CSV plus gnuplot .dat files; the seed defaults to 0."""
    seed = 0 if seed is None else seed
    preset = get_preset(name)
    try:
        experiments = preset.experiments(scale=scale, seed=seed)
    except ConfigError as exc:
        raise config_failure(exc) from None
    prepare_out_dir(out_dir)

    ui = ProgressReporter()
    ui.header(f"samba fig {name}: {preset.description} (scale {scale:g})")
    tables = []
    for i, cfg in enumerate(experiments, start=1):
        with ui.step(i, len(experiments), f"Running {cfg.name} (R={cfg.replications})") as step:
            try:
                tables.append(run_experiment(cfg, jobs=jobs, progress=False if no_progress else None))
            except Exception as exc:
                _logger.debug("Preset %s failed", cfg.name, exc_info=True)
                raise click.ClickException(f"preset {cfg.name} failed: {exc}") from None
            step.done()
    table = pd.concat(tables, ignore_index=True)

    extra: list[str] = []
    if preset.reference_curve:
        table[REFERENCE_COLUMN] = 100.0 / table["t"]
        extra = ["p_suboptimal_mean", REFERENCE_COLUMN]
    write_metrics_csv(table, out_dir / f"{name}.csv", extra_columns=extra)

    if name == "fig5":
        summary = fig5_summary(table)
        _write_csv(summary[["agent", "n_arms", "mean_reward", "mean_reward_se", "instances"]], out_dir / "fig5_summary.csv")
        for agent, grp in summary.groupby("agent", sort=False):
            write_dat(out_dir / f"fig5_{_safe(str(agent))}.dat", grp["n_arms"], grp["mean_reward"])
    else:
        value = "p_suboptimal_mean" if preset.reference_curve else "pseudo_regret_mean"
        for agent, grp in table.groupby("agent", sort=False):
            write_dat(out_dir / f"{name}_{_safe(str(agent))}.dat", grp["t"], grp[value])
        if preset.reference_curve:
            times = table["t"].drop_duplicates().sort_values()
            write_dat(out_dir / f"{name}_reference.dat", times, 100.0 / times)

    ui.info(f"Wrote {len(table)} rows ({len(METRIC_COLUMNS) + len(extra)} columns) to {out_dir}")
