import pytest
from click.testing import CliRunner

from sambabandit.__main__ import main
from sambabandit.cli import cli


def test_cli_verbose_flags_help():
    r1 = CliRunner().invoke(cli, ["-v"])
    r2 = CliRunner().invoke(cli, ["-vv"])
    assert r1.exit_code == 0 and r2.exit_code == 0
    assert "Usage:" in r1.output and "Usage:" in r2.output
    for name in ("run", "sweep", "fig", "verify"):
        assert name in r1.output


def test_module_entry_point(monkeypatch, capsys):
    monkeypatch.setattr("sys.argv", ["python -m sambabandit", "--version"])
    with pytest.raises(SystemExit) as exc:
        main()
    assert exc.value.code == 0
    assert capsys.readouterr().out.startswith("samba, version")
