"""
User-facing progress output for the CLI.

All human-readable messages from commands go through :class:`ProgressReporter`
so headers, numbered steps and summaries share one format. Replication-level
progress bars come from tqdm inside the harness.

Usage::

    ui = ProgressReporter()
    ui.header("samba run")
    with ui.step(1, 2, "Running four_arms") as s:
        table = run_experiment(cfg)
        s.done(f"{len(table)} rows")
"""

from __future__ import annotations

import logging
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator

import click

_logger = logging.getLogger(__name__)


@dataclass
class StepContext:
    num: int
    total: int
    message: str
    reporter: "ProgressReporter"
    _completed: bool = False

    def done(self, message: str = "done") -> None:
        if not self._completed:
            self.reporter._print(f" {message}")
            self._completed = True

    def error(self, message: str) -> None:
        if not self._completed:
            self.reporter._print(f" ERROR: {message}", err=True)
            self._completed = True


class ProgressReporter:
    """Consistent headers, ``[n/N]`` steps and summary lines."""

    SEPARATOR_WIDTH = 50
    SEPARATOR_CHAR = "="

    def _print(self, msg: str = "", nl: bool = True, err: bool = False) -> None:
        click.echo(msg, nl=nl, err=err)

    def header(self, text: str) -> None:
        self._print(text)
        self._print(self.SEPARATOR_CHAR * self.SEPARATOR_WIDTH)

    def info(self, message: str) -> None:
        self._print(message)

    def warn(self, message: str) -> None:
        self._print(f"WARNING: {message}", err=True)

    @contextmanager
    def step(self, num: int, total: int, message: str) -> Iterator[StepContext]:
        """Print ``[num/total] message...`` and close the line when the block ends."""
        self._print(f"[{num}/{total}] {message}...", nl=False)
        ctx = StepContext(num=num, total=total, message=message, reporter=self)
        try:
            yield ctx
        except Exception as exc:
            ctx.error(str(exc))
            raise
        finally:
            if not ctx._completed:
                ctx.done()

    def summary_item(self, label: str, value: str) -> None:
        self._print(f"  {label:<12} {value}")
