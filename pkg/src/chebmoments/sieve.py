"""Segmented sieve of Eratosthenes over odd numbers, with a process-wide cache."""

from __future__ import annotations

import math

import numpy as np

from .errors import InputError, SieveCeilingError

DEFAULT_CEILING = 10**8
HARD_CEILING = 10**9
SEGMENT = 1 << 23  # odd numbers per segment

_cache: dict[str, np.ndarray] = {}


def _small_primes(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    s = np.ones(n + 1, dtype=bool)
    s[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if s[p]:
            s[p * p :: p] = False
    return np.flatnonzero(s).astype(np.int64)


def segmented_primes(n: int, segment: int = SEGMENT) -> np.ndarray:
    """All primes <= n, ascending, as int64."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    if n > HARD_CEILING:
        raise SieveCeilingError(f"sieve limit {n} exceeds hard ceiling {HARD_CEILING}")
    base = _small_primes(math.isqrt(n))
    odd_base = base[base > 2]
    chunks = [np.array([2], dtype=np.int64)]
    # index i in a segment stands for the odd number lo + 2 i
    lo = 3
    while lo <= n:
        hi = min(n, lo + 2 * segment - 1)
        size = (hi - lo) // 2 + 1
        mark = np.ones(size, dtype=bool)
        for p in odd_base:
            p = int(p)
            if p * p > hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start % 2 == 0:
                start += p
            mark[(start - lo) // 2 :: p] = False
        chunks.append(lo + 2 * np.flatnonzero(mark).astype(np.int64))
        lo = hi + 1 if hi % 2 == 0 else hi + 2
    return np.concatenate(chunks)


def primes_upto(n: int, ceiling: int = DEFAULT_CEILING) -> np.ndarray:
    """Primes <= n, served from a cached sieve that only ever grows."""
    n = int(n)
    if n > ceiling:
        raise SieveCeilingError(f"prime range up to {n} exceeds the sieve ceiling {ceiling}")
    cur = _cache.get("primes")
    if cur is None or _cache["limit"][0] < n:
        # grow geometrically to amortise repeated requests
        limit = min(max(n, 2 * int(_cache["limit"][0]) if cur is not None else n), ceiling)
        _cache["primes"] = cur = segmented_primes(limit)
        _cache["limit"] = np.array([limit])
    return cur[: np.searchsorted(cur, n, side="right")]


def prime_powers(n: int, ceiling: int = DEFAULT_CEILING) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(value, prime, exponent) for every prime power p^m <= n, sorted by value."""
    if n < 2:
        e = np.zeros(0, dtype=np.int64)
        return e, e, e
    ps = primes_upto(n, ceiling)
    vals, prs, exps = [ps], [ps], [np.ones_like(ps)]
    small = ps[ps <= math.isqrt(n)]
    m = 2
    cur = small * small
    base = small
    while base.size:
        keep = cur <= n
        cur, base = cur[keep], base[keep]
        if not base.size:
            break
        vals.append(cur)
        prs.append(base)
        exps.append(np.full_like(base, m))
        cur = cur * base
        m += 1
    v = np.concatenate(vals)
    order = np.argsort(v, kind="stable")
    return v[order], np.concatenate(prs)[order], np.concatenate(exps)[order]


def von_mangoldt_bruteforce(n: int) -> np.ndarray:
    """Lambda(k) for k = 0..n by trial division (test oracle, small n only)."""
    if n > 10**6:
        raise InputError("brute-force von Mangoldt limited to n <= 1e6")
    out = np.zeros(n + 1)
    for k in range(2, n + 1):
        m, p = k, 2
        while p * p <= m and m % p:
            p += 1
        if p * p > m:
            p = m
        while m % p == 0:
            m //= p
        if m == 1:
            out[k] = math.log(p)
    return out
