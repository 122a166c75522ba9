"""Deterministic compensated summation.

Sums are reduced with a fixed pairwise tree of error-free TwoSum steps.
The rounding errors produced at each level are collected and added back
at the end, so the result is accurate to a few ulps of the exact sum and
is bit-stable for a given input order.
"""

from __future__ import annotations

import numpy as np


def _two_sum_tree(x: np.ndarray) -> float:
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.size == 0:
        return 0.0
    errs = []
    while x.size > 1:
        if x.size % 2:
            x = np.append(x, 0.0)
        a = x[0::2]
        b = x[1::2]
        s = a + b
        bb = s - a
        errs.append((a - (s - bb)) + (b - bb))
        x = s
    total_err = 0.0
    for e in errs:
        total_err += float(np.sum(e))
    return float(x[0]) + total_err


def comp_sum(x) -> complex | float:
    """Compensated sum of a real or complex array."""
    arr = np.asarray(x)
    if np.iscomplexobj(arr):
        return complex(_two_sum_tree(arr.real), _two_sum_tree(arr.imag))
    return _two_sum_tree(arr)
