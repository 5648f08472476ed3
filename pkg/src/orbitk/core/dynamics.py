"""The map phi_k, orbit analysis and canonical loops."""

from __future__ import annotations

import logging
from typing import Dict, List, Optional, Sequence

from orbitk.core.errors import ArithmeticOverflowError, DomainError, IterationBudgetError
from orbitk.core.models import FactorTable, Loop, TrajectoryRecord
from orbitk.core.numtheory import UINT64_MAX, is_prime, largest_prime_factor

logger = logging.getLogger(__name__)

DEFAULT_MAX_STEPS = 10_000_000


def _check_domain(x: int, k: int) -> None:
    if x < 2:
        raise DomainError(f"phi_k is defined on integers >= 2, got x={x}")
    if k < 1:
        raise DomainError(f"k must be a positive integer, got k={k}")


def phi(x: int, k: int, table: Optional[FactorTable] = None) -> int:
    _check_domain(x, k)
    if is_prime(x, table):
        if x + k > UINT64_MAX:
            raise ArithmeticOverflowError(f"{x} + {k} exceeds the 64-bit range")
        return x + k
    return largest_prime_factor(x, table)


def orbit_prefix(x0: int, k: int, table: Optional[FactorTable], n: int) -> List[int]:
    if n < 1:
        raise DomainError(f"orbit length must be >= 1, got {n}")
    _check_domain(x0, k)
    terms = [x0]
    while len(terms) < n:
        terms.append(phi(terms[-1], k, table))
    return terms


def canonicalize_loop(
    cycle_values: Sequence[int],
    k: int,
    table: Optional[FactorTable] = None,
    check_closure: bool = True,
) -> Loop:
    values = list(cycle_values)
    if not values:
        raise DomainError("a loop needs at least one element")
    if len(set(values)) != len(values):
        raise DomainError(f"loop elements must be distinct: {values}")
    if check_closure:
        for i, value in enumerate(values):
            following = values[(i + 1) % len(values)]
            if phi(value, k, table) != following:
                raise DomainError(f"{values} is not a cycle of phi_{k}: phi({value}) != {following}")
    start = values.index(min(values))
    return Loop(elements=tuple(values[start:] + values[:start]), k=k)


def analyze(
    x0: int,
    k: int,
    table: Optional[FactorTable] = None,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> TrajectoryRecord:
    _check_domain(x0, k)
    values: List[int] = []
    first_seen: Dict[int, int] = {}
    x = x0
    while x not in first_seen:
        if len(values) >= max_steps:
            raise IterationBudgetError(f"orbit of {x0} under phi_{k} did not repeat within {max_steps} steps")
        first_seen[x] = len(values)
        values.append(x)
        x = phi(x, k, table)
    start = first_seen[x]
    loop = canonicalize_loop(values[start:], k, table, check_closure=False)
    return TrajectoryRecord(
        x0=x0,
        k=k,
        preperiod=start,
        period=len(values) - start,
        stopping_time=len(values),
        loop=loop,
        prefix=tuple(values[:start]),
    )


def prime_run_length(
    values: Sequence[int],
    table: Optional[FactorTable] = None,
    cyclic: bool = False,
) -> int:
    """Longest run of consecutive primes in values (wrapping around when cyclic)."""
    flags = [is_prime(v, table) for v in values]
    if cyclic and flags and all(flags):
        return len(flags)
    sequence = flags + flags if cyclic else flags
    best = run = 0
    for flag in sequence:
        run = run + 1 if flag else 0
        best = max(best, run)
    return min(best, len(flags)) if cyclic else best
