"""Click options and error mapping shared by the subcommands."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Callable

import click

from .env_loader import JOBS_ENV_VAR
from .exceptions import ConfigError
from .rng import SEED_MAX

_logger = logging.getLogger(__name__)


class ConfigUsageError(click.ClickException):
    """Invalid configuration or arguments; exits with status 2."""

    exit_code = 2


def config_failure(exc: ConfigError) -> ConfigUsageError:
    _logger.debug("Configuration error", exc_info=exc)
    return ConfigUsageError(f"configuration error: {exc}")


def prepare_out_dir(out: Path) -> Path:
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigUsageError(f"cannot create output directory {out}: {exc}") from None
    return out


def out_option(required: bool = True) -> Callable:
    return click.option(
        "--out",
        "out_dir",
        type=click.Path(file_okay=False, path_type=Path),
        required=required,
        help="Directory for all output files.",
    )


seed_option = click.option(
    "--seed",
    type=click.IntRange(0, SEED_MAX),
    default=None,
    help="Base seed (unsigned 64-bit); overrides the config.",
)

jobs_option = click.option(
    "--jobs",
    type=click.IntRange(min=1),
    envvar=JOBS_ENV_VAR,
    default=1,
    show_default=True,
    help=f"Worker processes for replications (env: {JOBS_ENV_VAR}).",
)

progress_option = click.option(
    "--no-progress",
    is_flag=True,
    default=False,
    help="Never show progress bars.",
)
