"""Normalization helpers for flag and environment values."""

from __future__ import annotations

import re
from typing import Optional

from orbitk.core.errors import DomainError
from orbitk.core.models import PrimeAP

TRUTHY = {"1", "true", "yes"}

AP_RE = re.compile(r"^\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*$")


def is_truthy(value: object) -> bool:
    if value is None:
        return False
    return str(value).strip().lower() in TRUTHY


def parse_int(value: object) -> Optional[int]:
    if value is None:
        return None
    if isinstance(value, int):
        return value
    # allow 100_000 and 100,000 as well as 1e5
    text = str(value).strip().replace("_", "").replace(",", "")
    if not text:
        return None
    try:
        return int(text)
    except ValueError:
        pass
    try:
        number = float(text)
    except ValueError:
        return None
    if not number.is_integer():
        return None
    return int(number)


def parse_positive_int(value: object, name: str) -> int:
    number = parse_int(value)
    if number is None or number < 1:
        raise DomainError(f"{name} must be a positive integer, got {value!r}")
    return number


def parse_ap(value: str) -> PrimeAP:
    m = AP_RE.match(value)
    if not m:
        raise DomainError(f"progression must look like first,difference,length; got {value!r}")
    first, difference, length = (int(g) for g in m.groups())
    return PrimeAP(first=first, difference=difference, length=length)
