from __future__ import annotations

import logging
from typing import Optional

_DEFAULT_FMT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
_WORKER_FMT = "%(asctime)s %(levelname)s %(name)s [%(processName)s]: %(message)s"
_DEFAULT_DATEFMT = "%H:%M:%S"

# Third-party loggers that chatter at INFO/DEBUG during numeric work.
_NOISY_LOGGERS = ("numexpr", "numexpr.utils", "matplotlib", "fsspec")


def _cap_noisy_loggers() -> None:
    for name in _NOISY_LOGGERS:
        noisy = logging.getLogger(name)
        if noisy.level == logging.NOTSET or noisy.level < logging.WARNING:
            noisy.setLevel(logging.WARNING)


def configure_logging(level: Optional[int], fmt: str = _DEFAULT_FMT) -> None:
    """Configure root logging once; later calls only change the level."""
    lvl = level if level is not None else logging.WARNING
    root = logging.getLogger()

    if root.handlers:
        root.setLevel(lvl)
    else:
        logging.basicConfig(level=lvl, format=fmt, datefmt=_DEFAULT_DATEFMT)
    _cap_noisy_loggers()


def current_level() -> int:
    """Effective level of the ``sambabandit`` loggers, handed to worker processes."""
    return logging.getLogger("sambabandit").getEffectiveLevel()


def configure_worker_logging(level: int) -> None:
    """Pool initializer: replicate the parent's level, tagging records with the worker name."""
    configure_logging(level, fmt=_WORKER_FMT)
