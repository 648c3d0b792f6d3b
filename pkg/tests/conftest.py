from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from ribbon_core import RibbonGraph, parse
from settings import get_settings

DATA_DIR = Path(__file__).resolve().parents[1] / "backend" / "data"

SIX_VERTEX_TEXT = "v1: 1 8 12 / v2: 9 4 2 3 8 / v3: 11 10 5 6 9 / v4: 7 4 11 / v5: 5 2 1 6 12 / v6: 3 7 10"
SIX_VERTEX_POLY = "1412z^7 + 1692z^6 + 779z^5 + 189z^4 + 23z^3 + z^2"


@pytest.fixture(autouse=True)
def _clean_settings(monkeypatch: pytest.MonkeyPatch):
    for name in ("PETRIAL_BRUTEFORCE_CAP", "PETRIAL_RANK_CAP", "PETRIAL_THREADS", "PETRIAL_BATCH", "PETRIAL_RUN_LOG"):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def six_vertex() -> RibbonGraph:
    return parse(SIX_VERTEX_TEXT)


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR
