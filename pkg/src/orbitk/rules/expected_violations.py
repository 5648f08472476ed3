"""Violations the verifiers are known to report.

``even``: phi_2 keeps the prime 3 on the loop 3, 5, 7, 9, so no prime below 3
is ever reached. ``loop-bound``: for k <= 3 both the k^2/2 and k*sqrt(k)/2
bounds fail (k=1: loop 2 3 4; k=2: loops 2 4 and 3 5 7 9; k=3: loop 3 6).
``prime-run``: k=1 has the run 2, 3 and k=2 the run 3, 5, 7; from k=3 on a
run never exceeds k.
"""

from __future__ import annotations

from typing import Any, Dict, List

from orbitk.core.models import VerificationReport

EXPECTED_PAIRS: Dict[str, List[Dict[str, int]]] = {
    "even": [{"k": 2, "p": 3}],
}

# claim -> largest k whose violations are expected
SMALL_K_LIMITS: Dict[str, int] = {
    "loop-bound": 3,
    "prime-run": 2,
}


def is_expected(claim: str, violation: Dict[str, Any]) -> bool:
    if claim in SMALL_K_LIMITS:
        return violation.get("k", 0) <= SMALL_K_LIMITS[claim]
    for pair in EXPECTED_PAIRS.get(claim, []):
        if all(violation.get(key) == value for key, value in pair.items()):
            return True
    return False


def unexpected_violations(report: VerificationReport) -> List[Dict[str, Any]]:
    return [v for v in report.violations if not is_expected(report.claim, v)]


def _covers(report: VerificationReport, pair: Dict[str, int]) -> bool:
    k_values = report.scope.get("k_values")
    if k_values is None or pair["k"] not in k_values:
        return False
    return pair.get("p", 0) <= report.scope.get("p_limit", 0)


def missing_violations(report: VerificationReport) -> List[Dict[str, int]]:
    """Expected pairs inside the report's grid that the verifier did not report."""
    missing = []
    for pair in EXPECTED_PAIRS.get(report.claim, []):
        if not _covers(report, pair):
            continue
        if not any(all(v.get(key) == value for key, value in pair.items()) for v in report.violations):
            missing.append(pair)
    return missing
