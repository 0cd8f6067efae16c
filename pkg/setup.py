"""
Setup shim for sambabandit.

All metadata and the setuptools_scm version scheme live in pyproject.toml;
this file only exists for tools that still call ``python setup.py``.
"""

from setuptools import setup

if __name__ == "__main__":
    try:
        setup()
    except:  # noqa
        print(
            "\n\nBuilding sambabandit failed. It needs recent setuptools, "
            "setuptools_scm and wheel:\n"
            "   pip install -U setuptools setuptools_scm wheel\n\n"
        )
        raise
