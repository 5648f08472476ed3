"""Parameter sweeps, lemma verifiers and prime progressions."""

from __future__ import annotations

import logging
from math import isqrt
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from orbitk.core.catalog import enumerate_loops, seed_bound
from orbitk.core.dynamics import DEFAULT_MAX_STEPS, analyze, orbit_prefix, phi, prime_run_length
from orbitk.core.errors import DomainError, IterationBudgetError
from orbitk.core.models import FactorTable, Loop, PeriodRow, PrimeAP, SweepRow, TrajectoryRecord, VerificationReport
from orbitk.core.numtheory import is_prime, largest_prime_factor, primes_up_to, primorial, validate_prime_ap
from orbitk.core.parallel import map_with_table

logger = logging.getLogger(__name__)

DEFAULT_S_CAP = 1_000_000
DEFAULT_AP_DIFFERENCE_LIMIT = 10_000
DEFAULT_AP_FIRST_LIMIT = 10_000

Violation = Dict[str, Any]


def _check_k_range(k_min: int, k_max: int) -> None:
    if k_min < 1 or k_max < k_min:
        raise DomainError(f"k range [{k_min}, {k_max}] is empty or not positive")


def _check_k_values(k_values: Sequence[int], claim: str) -> None:
    if not k_values:
        raise DomainError(f"{claim}: the k grid is empty")


def _check_table_for(k_max: int, table: FactorTable, mode: str) -> None:
    required = seed_bound(k_max, mode)
    if table.limit < required:
        raise DomainError(f"factor table limit {table.limit} is below the seed bound {required} for k={k_max} ({mode})")


# Sweeps

def _sweep_row(k: int, table: FactorTable, mode: str) -> SweepRow:
    return SweepRow(k=k, num_loops=len(enumerate_loops(k, table, mode).loops))


def sweep_loop_counts(
    k_min: int,
    k_max: int,
    table: FactorTable,
    mode: str = "safe",
    threads: int = 1,
) -> List[SweepRow]:
    _check_k_range(k_min, k_max)
    _check_table_for(k_max, table, mode)
    logger.info("counting loops for k=%d..%d (%s bound, %d workers)", k_min, k_max, mode, threads)
    rows = map_with_table(_sweep_row, range(k_min, k_max + 1), table, threads, mode=mode)
    return sorted(rows, key=lambda row: row.k)


def _periods_for(k: int, table: FactorTable, mode: str) -> Tuple[int, List[int]]:
    return k, sorted({loop.period for loop in enumerate_loops(k, table, mode).loops})


def least_k_for_periods(
    l_max: int,
    k_max: int,
    table: FactorTable,
    mode: str = "safe",
    threads: int = 1,
) -> List[PeriodRow]:
    if l_max < 2:
        raise DomainError(f"l_max must be >= 2, got {l_max}")
    _check_k_range(1, k_max)
    _check_table_for(k_max, table, mode)
    wanted = set(range(2, l_max + 1))
    least: Dict[int, int] = {}
    batch = max(threads, 1)
    k = 1
    while k <= k_max and len(least) < len(wanted):
        ks = range(k, min(k + batch, k_max + 1))
        for k_found, periods in map_with_table(_periods_for, ks, table, threads, mode=mode):
            for period in periods:
                if period in wanted and period not in least:
                    least[period] = k_found
                    logger.debug("period %d first seen at k=%d", period, k_found)
        k = ks[-1] + 1
    logger.info("filled %d of %d periods scanning k <= %d", len(least), len(wanted), k - 1)
    return [PeriodRow(period=period, least_k=least.get(period)) for period in sorted(wanted)]


# Prime progressions

def _primes_through(limit: int, table: Optional[FactorTable]) -> Iterable[int]:
    if table is not None and limit <= table.limit:
        return primes_up_to(limit, table)
    return (n for n in range(2, limit + 1) if is_prime(n, table))


def find_prime_ap(
    length: int,
    difference_limit: int = DEFAULT_AP_DIFFERENCE_LIMIT,
    first_limit: int = DEFAULT_AP_FIRST_LIMIT,
    table: Optional[FactorTable] = None,
) -> Optional[PrimeAP]:
    if length < 2:
        raise DomainError(f"progression length must be >= 2, got {length}")
    # every admissible difference is a multiple of (length - 1)#
    step = primorial(length - 1)
    firsts = list(_primes_through(first_limit, table))
    for difference in range(step, difference_limit + 1, step):
        for first in firsts:
            if all(is_prime(first + i * difference, table) for i in range(1, length)):
                return PrimeAP(first=first, difference=difference, length=length)
    return None


def stopping_time_demo(
    ap: PrimeAP,
    table: Optional[FactorTable] = None,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> TrajectoryRecord:
    validate_prime_ap(ap, table)
    record = analyze(ap.first, ap.difference, table, max_steps)
    if record.stopping_time < ap.length:
        raise DomainError(f"stopping time {record.stopping_time} of {ap} is below its length")
    return record


# Verifiers

def verify_primorial_lemma(aps: Sequence[PrimeAP]) -> VerificationReport:
    report = VerificationReport(
        claim="primorial",
        grid="progressions " + "; ".join(f"{ap.first},{ap.difference},{ap.length}" for ap in aps),
    )
    for ap in aps:
        report.checked += 1
        modulus = primorial(ap.length - 1)
        if ap.difference % modulus:
            report.violations.append(
                {"first": ap.first, "difference": ap.difference, "length": ap.length, "primorial": modulus}
            )
    return report


def _merge(report: VerificationReport, parts: Iterable[Tuple[int, List[Violation]]]) -> VerificationReport:
    for checked, violations in parts:
        report.checked += checked
        report.violations.extend(violations)
    return report


def _odd_lemma_for(k: int, table: FactorTable, p_limit: int) -> Tuple[int, List[Violation]]:
    checked = 0
    violations: List[Violation] = []
    for p in primes_up_to(p_limit, table):
        if p <= k:
            continue
        checked += 1
        image = p + k
        if is_prime(image, table):
            violations.append({"k": k, "p": p, "image": image, "reason": "p+k prime"})
            continue
        descent = largest_prime_factor(image, table)
        if descent >= p:
            violations.append({"k": k, "p": p, "image": image, "reason": f"largest factor {descent} >= p"})
    return checked, violations


def verify_odd_lemma(
    k_values: Sequence[int],
    p_limit: int,
    table: FactorTable,
    threads: int = 1,
) -> VerificationReport:
    k_values = list(k_values)
    _check_k_values(k_values, "odd")
    bad = [k for k in k_values if k < 3 or k % 2 == 0]
    if bad:
        raise DomainError(f"odd lemma needs odd k >= 3, got {bad}")
    report = VerificationReport(
        claim="odd",
        grid=f"odd k in {_describe(k_values)}, primes k < p <= {p_limit}",
        scope={"k_values": k_values, "p_limit": p_limit},
    )
    return _merge(report, map_with_table(_odd_lemma_for, k_values, table, threads, p_limit=p_limit))


def _even_descent_for(k: int, table: FactorTable, p_limit: int, s_cap: int) -> Tuple[int, List[Violation]]:
    checked = 0
    violations: List[Violation] = []
    for p in primes_up_to(p_limit, table):
        if 2 * p <= k * k:
            continue
        checked += 1
        seen = {p}
        x = p
        for _ in range(s_cap):
            x = phi(x, k, table)
            if x < p and is_prime(x, table):
                break
            if x in seen:
                violations.append({"k": k, "p": p})
                break
            seen.add(x)
        else:
            raise IterationBudgetError(f"descent from p={p} under phi_{k} unresolved after {s_cap} steps")
    return checked, violations


def verify_even_descent(
    k_values: Sequence[int],
    p_limit: int,
    table: FactorTable,
    s_cap: int = DEFAULT_S_CAP,
    threads: int = 1,
) -> VerificationReport:
    k_values = list(k_values)
    _check_k_values(k_values, "even")
    bad = [k for k in k_values if k < 2 or k % 2]
    if bad:
        raise DomainError(f"even descent needs even k >= 2, got {bad}")
    report = VerificationReport(
        claim="even",
        grid=f"even k in {_describe(k_values)}, primes k^2/2 < p <= {p_limit}",
        scope={"k_values": k_values, "p_limit": p_limit},
    )
    return _merge(report, map_with_table(_even_descent_for, k_values, table, threads, p_limit=p_limit, s_cap=s_cap))


def _min_prime(loop: Loop, table: FactorTable) -> int:
    return min(v for v in loop.elements if is_prime(v, table))


def _loop_bounds_for(k: int, table: FactorTable) -> Tuple[int, List[Violation]]:
    catalog = enumerate_loops(k, table, "safe")
    violations: List[Violation] = []
    for loop in catalog.loops:
        smallest = _min_prime(loop, table)
        rendered = " ".join(map(str, loop.elements))
        # closed bounds: 2m <= k^2 and 4m^2 <= k^3
        if 2 * smallest > k * k:
            violations.append({"k": k, "bound": "paper", "min_prime": smallest, "loop": rendered})
        if 4 * smallest * smallest > k**3:
            violations.append({"k": k, "bound": "remark", "min_prime": smallest, "loop": rendered})
    remark_limit = isqrt(k**3) // 2
    allowed = len(primes_up_to(remark_limit, table)) if remark_limit >= 2 else 0
    if len(catalog.loops) > allowed:
        violations.append({"k": k, "bound": "remark-count", "loops": len(catalog.loops), "primes": allowed})
    return len(catalog.loops), violations


def verify_loop_prime_bound(
    k_min: int,
    k_max: int,
    table: FactorTable,
    threads: int = 1,
) -> VerificationReport:
    _check_k_range(k_min, k_max)
    _check_table_for(k_max, table, "safe")
    report = VerificationReport(claim="loop-bound", grid=f"k in [{k_min}, {k_max}], safe catalogs")
    return _merge(report, map_with_table(_loop_bounds_for, range(k_min, k_max + 1), table, threads))


def _prime_runs_for(k: int, table: FactorTable, x_max: int) -> Tuple[int, List[Violation]]:
    violations: List[Violation] = []
    for x0 in range(2, x_max + 1):
        record = analyze(x0, k, table)
        terms = orbit_prefix(x0, k, table, record.stopping_time + record.period)
        run = max(prime_run_length(terms, table), prime_run_length(record.loop.elements, table, cyclic=True))
        if run > k:
            violations.append({"k": k, "x0": x0, "run": run})
    return x_max - 1, violations


def verify_prime_run_bound(
    k_values: Sequence[int],
    x_max: int,
    table: FactorTable,
    threads: int = 1,
) -> VerificationReport:
    k_values = list(k_values)
    _check_k_values(k_values, "prime-run")
    report = VerificationReport(claim="prime-run", grid=f"k in {_describe(k_values)}, 2 <= x0 <= {x_max}")
    return _merge(report, map_with_table(_prime_runs_for, k_values, table, threads, x_max=x_max))


def verify_two_power_loops(n_max: int, table: Optional[FactorTable] = None) -> VerificationReport:
    cases = [(1, (2, 3, 4))] + [(2**n - 2, (2, 2**n)) for n in range(2, n_max + 1)]
    report = VerificationReport(claim="two-power", grid=f"k=1 and k=2^n-2 for 2 <= n <= {n_max}")
    for k, expected in cases:
        report.checked += 1
        found = analyze(2, k, table).loop.elements
        if found != expected:
            report.violations.append({"k": k, "expected": " ".join(map(str, expected)), "found": " ".join(map(str, found))})
    return report


def _describe(values: Sequence[int]) -> str:
    if not values:
        return "{}"
    return f"{{{values[0]}..{values[-1]}}} ({len(values)} values)"
