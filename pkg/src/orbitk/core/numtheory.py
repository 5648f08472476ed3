"""Prime tables, primality, largest prime factors and primorials."""

from __future__ import annotations

import logging
import random
from math import isqrt
from typing import List, Optional

import gmpy2
import numpy as np

from orbitk.core.errors import ArithmeticOverflowError, DomainError, ResourceLimitError
from orbitk.core.models import FactorTable, PrimeAP

logger = logging.getLogger(__name__)

UINT64_MAX = 2**64 - 1

# spf entries are stored as uint32
TABLE_LIMIT_MAX = 2**32 - 1
DEFAULT_SIEVE_MAX_BYTES = 1 << 30

# Miller-Rabin with these bases is exact below 3.3e24.
MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

RHO_BLOCK = 128


def build_factor_table(limit: int, max_bytes: int = DEFAULT_SIEVE_MAX_BYTES) -> FactorTable:
    if limit < 2:
        raise DomainError(f"factor table limit must be >= 2, got {limit}")
    required = (limit + 1) * np.dtype(np.uint32).itemsize
    if limit > TABLE_LIMIT_MAX or required > max_bytes:
        raise ResourceLimitError(
            f"factor table up to {limit} needs {required} bytes (budget {max_bytes})",
            required=limit,
        )
    try:
        spf = np.zeros(limit + 1, dtype=np.uint32)
    except MemoryError as exc:
        raise ResourceLimitError(f"cannot allocate factor table up to {limit}", required=limit) from exc

    for p in range(2, isqrt(limit) + 1):
        if spf[p]:
            continue
        block = spf[p * p :: p]
        block[block == 0] = p
    unset = np.flatnonzero(spf == 0)
    spf[unset] = unset
    spf.setflags(write=False)
    logger.debug("built factor table up to %d (%d bytes)", limit, required)
    return FactorTable(limit=limit, spf=spf)


def _miller_rabin(n: int) -> bool:
    for p in MR_BASES:
        if n % p == 0:
            return n == p
    return all(gmpy2.is_strong_prp(n, a) for a in MR_BASES)


def is_prime(n: int, table: Optional[FactorTable] = None) -> bool:
    if n < 2:
        return False
    if table is not None and n <= table.limit:
        return table.spf.item(n) == n
    return _miller_rabin(n)


def primes_up_to(limit: int, table: FactorTable) -> List[int]:
    if limit > table.limit:
        raise DomainError(f"primes up to {limit} requested from a table limited to {table.limit}")
    if limit < 2:
        return []
    primes = table.primes
    return primes[: int(np.searchsorted(primes, limit, side="right"))].tolist()


def _rho_factor(n: int) -> int:
    """Brent's rho: a nontrivial factor of the odd composite n."""
    rng = random.Random(n)
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            done = 0
            while done < r and g == 1:
                ys = y
                for _ in range(min(RHO_BLOCK, r - done)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = int(gmpy2.gcd(q, n))
                done += RHO_BLOCK
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = int(gmpy2.gcd(abs(x - ys), n))
        if g != n:
            return g


def _largest_by_rho(n: int) -> int:
    largest = 1
    for p in MR_BASES:
        if n % p == 0:
            largest = p
            while n % p == 0:
                n //= p
    if n == 1:
        return largest
    if _miller_rabin(n):
        return max(largest, n)
    d = _rho_factor(n)
    return max(largest, _largest_by_rho(d), _largest_by_rho(n // d))


def _largest_beyond_table(n: int, table: Optional[FactorTable]) -> int:
    if is_prime(n, table):
        return n
    largest = 1
    root = isqrt(n)
    if table is not None and n <= UINT64_MAX:
        primes = table.primes
        candidates = primes[: int(np.searchsorted(primes, root, side="right"))]
        divisors = candidates[np.uint64(n) % candidates == 0].tolist()
        for p in divisors:
            largest = p
            while n % p == 0:
                n //= p
        if n == 1:
            return largest
        if table.limit >= root or is_prime(n, table):
            # no factor <= sqrt(original n) remains, so the cofactor is prime
            return max(largest, n)
    return max(largest, _largest_by_rho(n))


def largest_prime_factor(n: int, table: Optional[FactorTable] = None) -> int:
    if n < 2:
        raise DomainError(f"largest prime factor is undefined for {n}")
    if table is not None and n <= table.limit:
        spf = table.spf
        largest = 1
        while n > 1:
            largest = spf.item(n)
            n //= largest
        return largest
    return _largest_beyond_table(n, table)


def primorial(n: int) -> int:
    if n < 1:
        raise DomainError(f"primorial is defined for n >= 1, got {n}")
    product = 1
    for candidate in range(2, n + 1):
        if not _miller_rabin(candidate):
            continue
        product *= candidate
        if product > UINT64_MAX:
            raise ArithmeticOverflowError(f"{n}# exceeds the 64-bit range")
    return product


def validate_prime_ap(ap: PrimeAP, table: Optional[FactorTable] = None) -> PrimeAP:
    if ap.length < 2 or ap.difference < 1:
        raise DomainError(f"invalid progression {ap}")
    for term in ap.terms:
        if not is_prime(term, table):
            raise DomainError(f"{term} in progression {ap} is not prime")
    return ap
