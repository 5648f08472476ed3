"""Run settings: config/orbitk.json merged over built-in defaults."""

from __future__ import annotations

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict

from orbitk.core.errors import DomainError
from orbitk.utils.normalize import is_truthy, parse_positive_int

logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parents[3]

DEFAULT_SETTINGS: Dict[str, Any] = {
    "max_steps": 10_000_000,
    "s_cap": 1_000_000,
    "sieve_max_bytes": 1 << 30,
    "long_k_threshold": 1000,
    "ap_difference_limit": 10_000,
    "ap_first_limit": 10_000,
}


def config_dir() -> Path:
    override = os.getenv("ORBITK_CONFIG_DIR", "")
    return Path(override) if override else PROJECT_ROOT / "config"


def _load_json(path: Path) -> Dict[str, Any]:
    if not path.exists():
        return {}
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path} is not valid JSON: {exc}") from exc


def load_settings() -> Dict[str, Any]:
    settings = dict(DEFAULT_SETTINGS)
    for key, value in _load_json(config_dir() / "orbitk.json").items():
        if key not in DEFAULT_SETTINGS:
            logger.warning("ignoring unknown setting %r", key)
            continue
        settings[key] = parse_positive_int(value, f"setting {key}")
    return settings


def env_threads(default: int = 1) -> int:
    raw = os.getenv("ORBITK_THREADS", "")
    if not raw.strip():
        return default
    return parse_positive_int(raw, "ORBITK_THREADS")


def long_runs_enabled() -> bool:
    return is_truthy(os.getenv("ORBITK_LONG"))


def log_level(default: str = "INFO") -> str:
    return os.getenv("ORBITK_LOG_LEVEL", default).upper()
