"""Domain data models for orbits, loops, catalogs and experiment rows."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np

BoundMode = Literal["safe", "paper", "remark"]
CatalogMode = Literal["safe", "paper", "remark", "brute-force"]

BOUND_MODES: Tuple[str, ...] = ("safe", "paper", "remark")


@dataclass(frozen=True)
class FactorTable:
    """Smallest-prime-factor table for every integer in [2, limit].

    ``spf[n] == n`` exactly when n is prime. Entries 0 and 1 hold themselves
    and are never consulted. The array is treated as read-only.
    """

    limit: int
    spf: np.ndarray = field(repr=False, compare=False)

    @cached_property
    def primes(self) -> np.ndarray:
        idx = np.arange(self.spf.shape[0], dtype=self.spf.dtype)
        found = np.flatnonzero(self.spf == idx)
        return found[found >= 2].astype(np.uint64)


@dataclass(frozen=True)
class PrimeAP:
    first: int
    difference: int
    length: int

    @property
    def terms(self) -> List[int]:
        return [self.first + i * self.difference for i in range(self.length)]


@dataclass(frozen=True)
class Loop:
    # canonical rotation: minimal element first, map order
    elements: Tuple[int, ...]
    k: int

    @property
    def period(self) -> int:
        return len(self.elements)

    @property
    def min_element(self) -> int:
        return self.elements[0]


@dataclass(frozen=True)
class TrajectoryRecord:
    x0: int
    k: int
    preperiod: int
    period: int
    stopping_time: int
    loop: Loop
    prefix: Tuple[int, ...]


@dataclass
class LoopCatalog:
    k: int
    loops: List[Loop]
    seed_bound_used: int
    seeds_processed: int
    mode: CatalogMode

    @property
    def periods(self) -> List[int]:
        return [loop.period for loop in self.loops]

    def element_sets(self) -> set[frozenset[int]]:
        return {frozenset(loop.elements) for loop in self.loops}


@dataclass(frozen=True)
class SweepRow:
    k: int
    num_loops: int


@dataclass(frozen=True)
class PeriodRow:
    period: int
    least_k: Optional[int]


@dataclass
class VerificationReport:
    claim: str
    grid: str
    checked: int = 0
    violations: List[Dict[str, Any]] = field(default_factory=list)
    # grid coverage (k values, p limit) for matching expected violations
    scope: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations


@dataclass
class RunConfig:
    command: str
    k: Optional[int] = None
    k_min: Optional[int] = None
    k_max: Optional[int] = None
    l_max: Optional[int] = None
    x0: Optional[int] = None
    n: int = 20
    mode: BoundMode = "safe"
    threads: int = 1
    max_steps: int = 10_000_000
    output_path: Optional[str] = None
    format: Literal["csv", "json"] = "csv"
    sieve_limit: Optional[int] = None
    long: bool = False
