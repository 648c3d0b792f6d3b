from __future__ import annotations

import pytest
from pydantic import ValidationError

from settings import Settings, get_settings, load_settings


def test_defaults() -> None:
    settings = load_settings()
    assert settings == Settings()
    assert (settings.bruteforce_cap, settings.rank_cap, settings.threads) == (24, 30, 1)
    assert settings.run_log is None


def test_environment_overrides_defaults(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("PETRIAL_RANK_CAP", "40")
    monkeypatch.setenv("PETRIAL_THREADS", "4")
    monkeypatch.setenv("PETRIAL_RUN_LOG", "runs.jsonl")
    settings = load_settings()
    assert settings.rank_cap == 40
    assert settings.threads == 4
    assert settings.run_log == "runs.jsonl"


def test_explicit_arguments_win(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("PETRIAL_THREADS", "4")
    assert load_settings(threads=2).threads == 2


def test_malformed_values_fall_back_to_defaults(monkeypatch: pytest.MonkeyPatch, caplog: pytest.LogCaptureFixture) -> None:
    monkeypatch.setenv("PETRIAL_BRUTEFORCE_CAP", "lots")
    assert load_settings().bruteforce_cap == 24
    assert "PETRIAL_BRUTEFORCE_CAP" in caplog.text


def test_non_positive_values_are_rejected(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("PETRIAL_THREADS", "0")
    with pytest.raises(ValidationError):
        load_settings()


def test_get_settings_is_cached() -> None:
    assert get_settings() is get_settings()
