"""CLI command: run the experiments of a config file."""

from __future__ import annotations

import logging
from pathlib import Path

import click

from .config import load_config
from .exceptions import ConfigError
from .harness import run_experiment, write_metrics_csv
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


@click.command("run")
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    required=True,
    help="Experiment config (JSON, schema 1).",
)
@out_option()
@seed_option
@jobs_option
@progress_option
def run_cmd(config_path: Path, out_dir: Path, seed: int | None, jobs: int, no_progress: bool) -> None:
    """Run every experiment in CONFIG and write one metrics CSV per experiment."""
    try:
        experiments = load_config(config_path, seed=seed)
    except ConfigError as exc:
        raise config_failure(exc) from None
    prepare_out_dir(out_dir)

    ui = ProgressReporter()
    ui.header(f"samba run: {config_path.name}")
    for i, cfg in enumerate(experiments, start=1):
        with ui.step(i, len(experiments), f"Running {cfg.name}") as step:
            try:
                table = run_experiment(cfg, jobs=jobs, progress=False if no_progress else None)
            except ConfigError as exc:
                raise config_failure(exc) from None
            except Exception as exc:
                _logger.debug("Experiment %s failed", cfg.name, exc_info=True)
                raise click.ClickException(f"experiment {cfg.name} failed: {exc}") from None
            path = out_dir / f"{cfg.name}.csv"
            write_metrics_csv(table, path)
            step.done(f"{len(table)} rows -> {path}")
