"""Plain records built from catalogs, sweeps, orbits and verification reports."""

from __future__ import annotations

from dataclasses import asdict
from typing import Any, Dict, List, Sequence

from orbitk.core.models import LoopCatalog, PeriodRow, PrimeAP, SweepRow, TrajectoryRecord, VerificationReport

LOOP_FIELDS = ("loop_id", "period", "min_element", "elements")
SWEEP_FIELDS = ("k", "num_loops")
PERIOD_FIELDS = ("period", "least_k")
VIOLATION_FIELDS = ("claim", "instance")
AP_FIELDS = ("first", "difference", "length", "stopping_time")


def _join(values: Sequence[int]) -> str:
    return " ".join(str(v) for v in values)


def catalog_records(catalog: LoopCatalog) -> List[Dict[str, Any]]:
    return [
        {
            "loop_id": loop_id,
            "period": loop.period,
            "min_element": loop.min_element,
            "elements": _join(loop.elements),
        }
        for loop_id, loop in enumerate(catalog.loops)
    ]


def sweep_records(rows: Sequence[SweepRow]) -> List[Dict[str, Any]]:
    return [asdict(row) for row in rows]


def period_records(rows: Sequence[PeriodRow]) -> List[Dict[str, Any]]:
    return [asdict(row) for row in rows]


def ap_record(ap: PrimeAP, record: TrajectoryRecord) -> Dict[str, Any]:
    return {
        "first": ap.first,
        "difference": ap.difference,
        "length": ap.length,
        "stopping_time": record.stopping_time,
    }


def violation_records(report: VerificationReport) -> List[Dict[str, Any]]:
    return [
        {"claim": report.claim, "instance": " ".join(f"{key}={value}" for key, value in violation.items())}
        for violation in report.violations
    ]


def verification_document(
    report: VerificationReport,
    unexpected: List[Dict[str, Any]],
    missing: Sequence[Dict[str, Any]] = (),
) -> Dict[str, Any]:
    return {
        "claim": report.claim,
        "grid": report.grid,
        "checked": report.checked,
        "violations": report.violations,
        "unexpected": unexpected,
        "missing": list(missing),
    }


def trajectory_document(record: TrajectoryRecord, terms: Sequence[int]) -> Dict[str, Any]:
    return {
        "x0": record.x0,
        "k": record.k,
        "terms": list(terms),
        "prefix": list(record.prefix),
        "loop": list(record.loop.elements),
        "preperiod": record.preperiod,
        "period": record.period,
        "stopping_time": record.stopping_time,
    }


def render_orbit(record: TrajectoryRecord, terms: Sequence[int]) -> str:
    # first pass through the loop is bracketed
    first, last = record.preperiod, record.stopping_time - 1
    shown = []
    for i, term in enumerate(terms):
        text = str(term)
        if i == first:
            text = "[" + text
        if i == last:
            text = text + "]"
        shown.append(text)
    lines = [
        f"S({record.x0},{record.k}) = {', '.join(shown)}, ...",
        f"loop: {_join(record.loop.elements)}",
        f"preperiod: {record.preperiod}",
        f"period: {record.period}",
        f"stopping time: {record.stopping_time}",
    ]
    return "\n".join(lines) + "\n"
