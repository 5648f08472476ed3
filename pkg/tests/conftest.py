from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from orbitk.core.numtheory import build_factor_table  # noqa: E402
from orbitk.utils.normalize import is_truthy  # noqa: E402

TABLE_LIMIT = 2_000_000


def pytest_configure(config):
    config.addinivalue_line("markers", "long: acceptance runs gated on ORBITK_LONG")


def pytest_collection_modifyitems(config, items):
    if is_truthy(os.getenv("ORBITK_LONG")):
        return
    skip = pytest.mark.skip(reason="set ORBITK_LONG=1 to run long acceptance checks")
    for item in items:
        if item.get_closest_marker("long") is not None:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def table():
    return build_factor_table(TABLE_LIMIT)


@pytest.fixture(scope="session")
def golden_orbits():
    return json.loads((ROOT / "data" / "golden_orbits.json").read_text(encoding="utf-8"))


@pytest.fixture
def clean_env(monkeypatch, tmp_path):
    for name in ("ORBITK_THREADS", "ORBITK_LONG", "ORBITK_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("ORBITK_CONFIG_DIR", str(tmp_path / "config"))
    return tmp_path
