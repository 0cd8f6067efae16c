"""CLI command: run a theory-check suite."""

from __future__ import annotations

import logging
from pathlib import Path

import click

from .checks import SUITES, CheckStatus, run_suite
from .exceptions import ConfigError, PreconditionError
from .options import config_failure, jobs_option, out_option, prepare_out_dir, seed_option
from .progress import ProgressReporter

_logger = logging.getLogger(__name__)


@click.command("verify")
@click.argument("suite", type=click.Choice(SUITES), default="all")
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["text", "json"]),
    default="text",
    show_default=True,
    help="Report format on stdout.",
)
@out_option(required=False)
@click.option(
    "--replications",
    type=click.IntRange(min=1),
    default=100,
    show_default=True,
    help="Replications for the embedded-chain suite (below 100 is inconclusive).",
)
@click.option(
    "--horizon",
    type=click.IntRange(min=2),
    default=10_000,
    show_default=True,
    help="Horizon for the embedded-chain suite.",
)
@click.option(
    "--resolution",
    type=click.IntRange(min=100),
    default=10_000,
    show_default=True,
    help="Grid resolution for the lemma suite.",
)
@seed_option
@jobs_option
def verify_cmd(
    suite: str,
    fmt: str,
    out_dir: Path | None,
    replications: int,
    horizon: int,
    resolution: int,
    seed: int | None,
    jobs: int,
) -> None:
    """Run SUITE (lemmas, drift, embedded or all); exit 1 if any hard check fails."""
    try:
        report = run_suite(
            suite,
            resolution=resolution,
            replications=replications,
            horizon=horizon,
            seed=seed or 0,
            jobs=jobs,
        )
    except ConfigError as exc:
        raise config_failure(exc) from None
    except PreconditionError as exc:
        raise click.ClickException(f"check precondition failed: {exc}") from None

    click.echo(report.to_json() if fmt == "json" else report.to_text())

    if out_dir is not None:
        prepare_out_dir(out_dir)
        path = out_dir / f"verify_{suite}.json"
        path.write_text(report.to_json() + "\n", encoding="utf-8")
        _logger.info("Wrote %s", path)

    inconclusive = report.by_status(CheckStatus.INCONCLUSIVE)
    if inconclusive:
        names = ", ".join(r.name for r in inconclusive)
        ProgressReporter().warn(f"inconclusive checks: {names}")
    if not report.passed:
        failed = report.by_status(CheckStatus.FAIL)
        raise click.ClickException(
            f"suite {suite}: {len(failed)} check(s) failed: {', '.join(r.name for r in failed)}"
        )
