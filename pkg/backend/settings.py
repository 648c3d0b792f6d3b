"""
Runtime settings.

Each value comes from an explicit argument, then the environment (a .env file
is read once), then the default.
"""
from __future__ import annotations

import logging
import os
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, PositiveInt

log = logging.getLogger(__name__)


class Settings(BaseModel):
    bruteforce_cap: PositiveInt = 24
    rank_cap: PositiveInt = 30
    threads: PositiveInt = 1
    batch_size: PositiveInt = 1 << 16
    run_log: Optional[str] = None


def _env_int(name: str) -> Optional[int]:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return None
    try:
        return int(raw)
    except ValueError:
        log.warning("Ignoring %s=%r (not an integer)", name, raw)
        return None


def load_settings(**overrides) -> Settings:
    load_dotenv()

    values = {
        "bruteforce_cap": _env_int("PETRIAL_BRUTEFORCE_CAP"),
        "rank_cap": _env_int("PETRIAL_RANK_CAP"),
        "threads": _env_int("PETRIAL_THREADS"),
        "batch_size": _env_int("PETRIAL_BATCH"),
        "run_log": os.getenv("PETRIAL_RUN_LOG") or None,
    }
    values.update(overrides)
    return Settings(**{k: v for k, v in values.items() if v is not None})


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return load_settings()
