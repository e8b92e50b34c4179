from pathlib import Path

import pytest
from sfqsim.config.settings import Settings, get_settings


def test_settings_defaults() -> None:
    settings = Settings()

    assert settings.output_dir == Path("runs")
    assert settings.backend == "exact-segment"
    assert settings.workers == 1


def test_settings_read_prefixed_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("SFQSIM_WORKERS", "4")
    monkeypatch.setenv("SFQSIM_LOG_LEVEL", "debug")
    monkeypatch.setenv("SFQSIM_BACKEND", "trotter4")

    settings = Settings()

    assert settings.workers == 4
    assert settings.log_level == "DEBUG"
    assert settings.backend == "trotter4"


def test_settings_reject_non_positive_workers() -> None:
    with pytest.raises(ValueError, match="at least 1"):
        Settings(workers=0)


def test_get_settings_is_cached() -> None:
    get_settings.cache_clear()

    first = get_settings()
    second = get_settings()

    assert first is second
