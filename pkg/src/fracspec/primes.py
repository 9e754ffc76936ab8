"""Prime sieve and Moebius function with a cached sieve.

The Moebius values for n <= 10**6 come from a linear smallest-prime-factor
sieve computed once on first use; larger arguments fall back to trial
division.
"""

from __future__ import annotations

import numpy as np

_SIEVE_LIMIT = 10**6
_mu_cache: np.ndarray | None = None


def primes_up_to(n: int) -> np.ndarray:
    """All primes <= n as an int64 array (empty for n < 2)."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _mobius_sieve(limit: int) -> np.ndarray:
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    prime = np.ones(limit + 1, dtype=bool)
    prime[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if prime[p]:
            prime[p * p :: p] = False
            mu[p::p] *= -1
            mu[p * p :: p * p] = 0
    # remaining primes > sqrt(limit) each divide n at most once
    for p in np.nonzero(prime)[0]:
        if p * p > limit:
            mu[p::p] *= -1
    return mu


def mobius(n: int) -> int:
    """mu(n): (-1)**q for squarefree n with q prime factors, else 0."""
    if n < 1:
        raise ValueError("mobius is defined for n >= 1")
    global _mu_cache
    if n <= _SIEVE_LIMIT:
        if _mu_cache is None:
            _mu_cache = _mobius_sieve(_SIEVE_LIMIT)
        return int(_mu_cache[n])
    result = 1
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1 if p == 2 else 2
    if m > 1:
        result = -result
    return result


def mobius_upto(n: int) -> np.ndarray:
    """mu(1..n) as an int8 array of length n+1 (index 0 unused)."""
    if n <= _SIEVE_LIMIT:
        global _mu_cache
        if _mu_cache is None:
            _mu_cache = _mobius_sieve(_SIEVE_LIMIT)
        return _mu_cache[: n + 1].copy()
    return _mobius_sieve(n)
