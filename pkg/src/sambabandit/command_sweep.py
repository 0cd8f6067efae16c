"""CLI command: parameter sweeps with a final-snapshot summary per experiment."""

from __future__ import annotations

import logging
from pathlib import Path

import click

from .config import load_config
from .exceptions import ConfigError
from .harness import CSV_FLOAT_FORMAT, run_experiment, summarize_final, write_metrics_csv
from .options import (
    config_failure,
    jobs_option,
    out_option,
    prepare_out_dir,
    progress_option,
    seed_option,
)
from .progress import ProgressReporter

_logger = logging.getLogger(__name__)


@click.command("sweep")
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    required=True,
    help="Experiment config whose experiments carry a 'sweep' block.",
)
@out_option()
@seed_option
@jobs_option
@progress_option
def sweep_cmd(config_path: Path, out_dir: Path, seed: int | None, jobs: int, no_progress: bool) -> None:
    """Expand the sweeps in CONFIG, run them, and write metrics plus summary CSVs."""
    try:
        experiments = load_config(config_path, seed=seed)
    except ConfigError as exc:
        raise config_failure(exc) from None
    prepare_out_dir(out_dir)

    ui = ProgressReporter()
    ui.header(f"samba sweep: {config_path.name}")
    for i, cfg in enumerate(experiments, start=1):
        with ui.step(i, len(experiments), f"Sweeping {cfg.name} ({len(cfg.agents)} agents)") as step:
            try:
                table = run_experiment(cfg, jobs=jobs, progress=False if no_progress else None)
            except Exception as exc:
                _logger.debug("Experiment %s failed", cfg.name, exc_info=True)
                raise click.ClickException(f"experiment {cfg.name} failed: {exc}") from None
            write_metrics_csv(table, out_dir / f"{cfg.name}.csv")
            summary = summarize_final(table)
            summary.to_csv(
                out_dir / f"{cfg.name}_summary.csv",
                index=False,
                float_format=CSV_FLOAT_FORMAT,
                lineterminator="\n",
                encoding="utf-8",
            )
            step.done(f"{len(summary)} agents")
        for row in summary.itertuples(index=False):
            ui.summary_item(
                str(row.agent), f"regret {row.pseudo_regret_mean:.4g} +/- {row.pseudo_regret_se:.2g}"
            )
