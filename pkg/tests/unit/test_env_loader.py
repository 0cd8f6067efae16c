import logging
import sys
import types
from pathlib import Path

import pytest

from sambabandit.env_loader import JOBS_ENV_VAR, jobs_from_env, load_env_files


@pytest.fixture
def fake_dotenv(monkeypatch):
    """Install a dummy `dotenv` module that records which paths were loaded."""
    calls = []

    def fake_load_dotenv(path, override=False):
        calls.append(Path(path))
        return True

    dummy = types.ModuleType("dotenv")
    dummy.load_dotenv = fake_load_dotenv
    monkeypatch.setitem(sys.modules, "dotenv", dummy)
    return calls


def test_load_env_files_loads_first_existing(tmp_path, fake_dotenv):
    env1 = tmp_path / ".env"
    env2 = tmp_path / ".dotenv"
    env1.write_text(f"{JOBS_ENV_VAR}=4\n")
    env2.write_text("SHOULD_NOT_BE_USED=1\n")

    load_env_files(candidates=[env1, env2], quiet=True)

    assert fake_dotenv == [env1]


def test_load_env_files_no_existing_files(tmp_path, fake_dotenv):
    load_env_files(candidates=[tmp_path / "missing.env"], quiet=True)
    assert fake_dotenv == []


def test_load_env_files_defaults_to_cwd(tmp_path, monkeypatch, fake_dotenv):
    monkeypatch.chdir(tmp_path)
    (tmp_path / ".dotenv").write_text(f"{JOBS_ENV_VAR}=2\n")
    load_env_files()
    assert fake_dotenv == [tmp_path / ".dotenv"]


class TestJobsFromEnv:
    def test_unset(self) -> None:
        assert jobs_from_env() == 1
        assert jobs_from_env(default=3) == 3

    def test_value(self, monkeypatch) -> None:
        monkeypatch.setenv(JOBS_ENV_VAR, " 4 ")
        assert jobs_from_env() == 4

    @pytest.mark.parametrize("raw", ["many", "0", "-2"])
    def test_bad_values_fall_back(self, monkeypatch, caplog, raw) -> None:
        monkeypatch.setenv(JOBS_ENV_VAR, raw)
        with caplog.at_level(logging.WARNING, logger="sambabandit.env_loader"):
            assert jobs_from_env() == 1
        assert any(JOBS_ENV_VAR in rec.message for rec in caplog.records)
