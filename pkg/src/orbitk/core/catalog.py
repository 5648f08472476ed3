"""Complete loop catalogs of phi_k for a fixed k."""

from __future__ import annotations

import logging
from math import isqrt
from typing import Dict, List, Optional, Tuple

import numpy as np

from orbitk.core.dynamics import DEFAULT_MAX_STEPS, analyze, canonicalize_loop, phi
from orbitk.core.errors import DomainError, IterationBudgetError
from orbitk.core.models import BOUND_MODES, FactorTable, Loop, LoopCatalog
from orbitk.core.numtheory import primes_up_to

logger = logging.getLogger(__name__)

# memo covers values <= MEMO_FACTOR * seed bound
MEMO_FACTOR = 2


def seed_bound(k: int, mode: str = "safe") -> int:
    if k < 1:
        raise DomainError(f"k must be a positive integer, got k={k}")
    if mode not in BOUND_MODES:
        raise DomainError(f"unknown bound mode {mode!r}; expected one of {', '.join(BOUND_MODES)}")
    paper = (k * k + 1) // 2
    if mode == "paper":
        return paper
    if mode == "remark":
        # ceil(sqrt(k^3) / 2) == ceil(ceil(sqrt(k^3)) / 2)
        cube = k**3
        root = isqrt(cube)
        if root * root < cube:
            root += 1
        return (root + 1) // 2
    return max(paper, 2 * k)


def sieve_limit_for(k_max: int, mode: str = "safe") -> int:
    return max(MEMO_FACTOR * seed_bound(k_max, mode) + k_max, 100)


def _sorted_loops(loops: List[Loop]) -> List[Loop]:
    return sorted(loops, key=lambda loop: (loop.min_element, loop.period))


def enumerate_loops(
    k: int,
    table: FactorTable,
    mode: str = "safe",
    use_memo: bool = True,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> LoopCatalog:
    bound = seed_bound(k, mode)
    if table.limit < bound:
        raise DomainError(f"factor table limit {table.limit} is below the seed bound {bound} for k={k} ({mode})")

    seeds = primes_up_to(bound, table)
    memo_limit = MEMO_FACTOR * bound
    memo: Optional[np.ndarray] = np.full(memo_limit + 1, -1, dtype=np.int32) if use_memo else None
    loop_ids: Dict[Tuple[int, ...], int] = {}
    loops: List[Loop] = []

    for seed in seeds:
        if memo is not None and memo.item(seed) >= 0:
            continue
        path: List[int] = []
        position: Dict[int, int] = {}
        x = seed
        while True:
            if memo is not None and x <= memo_limit and memo.item(x) >= 0:
                loop_id = memo.item(x)
                break
            if x in position:
                loop = canonicalize_loop(path[position[x] :], k, table, check_closure=False)
                loop_id = loop_ids.get(loop.elements, -1)
                if loop_id < 0:
                    loop_id = len(loops)
                    loop_ids[loop.elements] = loop_id
                    loops.append(loop)
                    logger.debug("k=%d: new loop of period %d from seed %d", k, loop.period, seed)
                break
            if len(path) >= max_steps:
                raise IterationBudgetError(f"orbit of {seed} under phi_{k} did not close within {max_steps} steps")
            position[x] = len(path)
            path.append(x)
            x = phi(x, k, table)
        if memo is not None:
            for value in path:
                if value <= memo_limit:
                    memo[value] = loop_id

    return LoopCatalog(
        k=k,
        loops=_sorted_loops(loops),
        seed_bound_used=bound,
        seeds_processed=len(seeds),
        mode=mode,  # type: ignore[arg-type]
    )


def brute_force_loops(
    k: int,
    x_max: int,
    table: Optional[FactorTable] = None,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> LoopCatalog:
    if x_max < 2:
        raise DomainError(f"x_max must be >= 2, got {x_max}")
    found: Dict[Tuple[int, ...], Loop] = {}
    for x0 in range(2, x_max + 1):
        loop = analyze(x0, k, table, max_steps).loop
        found.setdefault(loop.elements, loop)
    return LoopCatalog(
        k=k,
        loops=_sorted_loops(list(found.values())),
        seed_bound_used=x_max,
        seeds_processed=x_max - 1,
        mode="brute-force",
    )


def loop_count(k: int, table: FactorTable, mode: str = "safe") -> int:
    return len(enumerate_loops(k, table, mode).loops)
