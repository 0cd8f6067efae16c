"""``python -m sambabandit`` behaves like the ``samba`` console script."""

from __future__ import annotations

import sys

from .cli import cli


def main() -> None:
    # reports print symbols like Δ and α; never crash on a narrow console encoding
    for stream in (sys.stdout, sys.stderr):
        try:
            stream.reconfigure(encoding="utf-8", errors="backslashreplace")
        except (AttributeError, ValueError):
            pass
    cli(prog_name="samba")


if __name__ == "__main__":
    main()
