"""Symmetric-group characters: Murnaghan–Nakayama recursion and hook lengths."""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Sequence

from .finite import partitions


def hook_length_degree(lam: Sequence[int]) -> int:
    lam = [p for p in lam if p > 0]
    n = sum(lam)
    conj = [sum(1 for p in lam if p > j) for j in range(lam[0])] if lam else []
    prod = 1
    for i, row in enumerate(lam):
        for j in range(row):
            prod *= (row - j - 1) + (conj[j] - i - 1) + 1
    return math.factorial(n) // prod


def partition_count(n: int) -> int:
    """p(n) via Euler's pentagonal recurrence (exact integers)."""
    p = [1] + [0] * n
    for m in range(1, n + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[m - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p[n]


def _beta_set(lam: Sequence[int]) -> tuple[int, ...]:
    L = len(lam)
    return tuple(sorted(lam[i] + (L - 1 - i) for i in range(L)))


@lru_cache(maxsize=None)
def _mn(beta: tuple[int, ...], mu: tuple[int, ...]) -> int:
    # beads on an abacus; removing a rim hook of length r moves a bead b -> b - r
    if not mu:
        return 1
    r, rest = mu[0], mu[1:]
    occupied = set(beta)
    total = 0
    for b in beta:
        nb = b - r
        if nb < 0 or nb in occupied:
            continue
        between = sum(1 for c in beta if nb < c < b)
        new = tuple(sorted((occupied - {b}) | {nb}))
        val = _mn(new, rest)
        if val:
            total += -val if between % 2 else val
    return total


def mn_character(lam: Sequence[int], mu: Sequence[int]) -> int:
    """chi^lam evaluated on the class of cycle type mu."""
    if sum(lam) != sum(mu):
        raise ValueError("partitions of different sizes")
    return _mn(_beta_set(list(lam)), tuple(sorted(mu, reverse=True)))


def mn_table(n: int) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]], list[list[int]]]:
    """(character partitions, class partitions, integer values)."""
    classes = partitions(n)  # identity class (1^n) first
    chars = sorted(classes, reverse=True)  # trivial (n) first
    values = [[mn_character(lam, mu) for mu in classes] for lam in chars]
    return chars, classes, values
