"""Class functions and the character-weighted functionals built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from ..errors import InputError, NumericError
from .symmetric import hook_length_degree, partition_count
from .tables import CharacterTable, compatible


@dataclass(frozen=True, eq=False)
class ClassFunction:
    table: CharacterTable
    values: np.ndarray  # one complex value per conjugacy class

    def __post_init__(self):
        v = np.array(self.values, dtype=np.complex128)
        if v.shape != (self.table.group.num_classes,):
            raise InputError("class function needs one value per conjugacy class")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def group(self):
        return self.table.group

    @cached_property
    def fourier(self) -> np.ndarray:
        t = self.table
        f = (t.values.conj() * t.sizes) @ self.values / t.group.order
        f.setflags(write=False)
        return f

    def __add__(self, other: "ClassFunction") -> "ClassFunction":
        _same(self, other)
        return ClassFunction(self.table, self.values + other.values)

    def __sub__(self, other: "ClassFunction") -> "ClassFunction":
        _same(self, other)
        return ClassFunction(self.table, self.values - other.values)

    def __mul__(self, c) -> "ClassFunction":
        return ClassFunction(self.table, self.values * c)

    __rmul__ = __mul__

    def conj(self) -> "ClassFunction":
        return ClassFunction(self.table, self.values.conj())

    def is_zero(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.values) <= tol))

    def l2_norm_sq(self) -> float:
        """(1/|G|) sum_g |t(g)|^2."""
        t = self.table
        return float(np.sum(t.sizes * np.abs(self.values) ** 2) / t.group.order)

    @classmethod
    def from_fourier(cls, table: CharacterTable, coeffs) -> "ClassFunction":
        return cls(table, np.asarray(coeffs, dtype=np.complex128) @ table.values)


def _same(a: ClassFunction, b: ClassFunction) -> None:
    if not compatible(a.table, b.table):
        raise InputError("class functions live on different groups")


# -- named class functions ------------------------------------------------

def delta_identity(table: CharacterTable, scaled: bool = False) -> ClassFunction:
    v = np.zeros(table.group.num_classes)
    v[0] = table.group.order if scaled else 1.0
    return ClassFunction(table, v)


def indicator(table: CharacterTable, classes: Iterable[int]) -> ClassFunction:
    v = np.zeros(table.group.num_classes)
    for c in classes:
        v[c] = 1.0
    return ClassFunction(table, v)


def constant(table: CharacterTable, c: complex = 1.0) -> ClassFunction:
    return ClassFunction(table, np.full(table.group.num_classes, c, dtype=np.complex128))


def character(table: CharacterTable, i: int) -> ClassFunction:
    return ClassFunction(table, table.values[i])


def real_part_character(table: CharacterTable, i: int) -> ClassFunction:
    """(chi + conj chi)/2."""
    return ClassFunction(table, table.values[i].real.astype(np.complex128))


# -- functionals -----------------------------------------------------------

def fourier_coeff(t: ClassFunction, chi: int) -> complex:
    if not 0 <= chi < t.table.num_chars:
        raise InputError("character index out of range")
    return complex(t.fourier[chi])


def _subset(table: CharacterTable, xi) -> np.ndarray:
    if xi is None:
        return np.arange(table.num_chars)
    idx = np.array(sorted(set(int(i) for i in xi)), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= table.num_chars):
        raise InputError("character subset out of range")
    return idx


def lambda_norm(t: ClassFunction, j: int, k: int, xi: Iterable[int] | None = None) -> float:
    """sum over chi in xi of chi(1)^j |t^(chi)|^k."""
    if j < 0 or k < 0:
        raise InputError("lambda norm exponents must be nonnegative")
    idx = _subset(t.table, xi)
    deg = np.asarray(t.table.degrees, dtype=np.float64)[idx]
    return float(np.sum(deg ** j * np.abs(t.fourier[idx]) ** k))


def s_of_weights(table: CharacterTable, c, xi: Iterable[int] | None = None) -> tuple[float, int]:
    """max_{a != e} |sum chi(a) c_chi| / sum chi(1) c_chi, with the smallest class attaining it."""
    c = np.asarray(c, dtype=np.float64)
    if np.any(c < 0):
        raise InputError("weights must be nonnegative")
    idx = _subset(table, xi)
    if table.group.order == 1:
        return 0.0, 0
    vals = table.values[idx]
    w = c[idx]
    denom = float(np.sum(vals[:, 0].real * w))
    if denom <= 0:
        raise InputError("zero denominator in the off-identity character ratio")
    sums = np.abs(w @ vals[:, 1:]) / denom
    best = int(np.argmax(sums))
    # smallest class index within rounding of the max
    ties = np.flatnonzero(sums >= sums[best] - 1e-14)
    best = int(ties[0])
    return float(sums[best]), best + 1


def s_t_with_class(t: ClassFunction, xi: Iterable[int] | None = None) -> tuple[float, int]:
    if t.is_zero():
        raise InputError("S is undefined for the zero class function")
    return s_of_weights(t.table, np.abs(t.fourier) ** 2, xi)


def s_t(t: ClassFunction, xi: Iterable[int] | None = None) -> float:
    return s_t_with_class(t, xi)[0]


def frobenius_schur(chi: int, table: CharacterTable, tol: float = 1e-8) -> int:
    g = table.group
    sq = np.asarray(g.square_map)
    val = complex(np.sum(table.sizes * table.values[chi, sq]) / g.order)
    r = round(val.real)
    if abs(val - r) > tol or r not in (-1, 0, 1):
        raise NumericError(f"Frobenius-Schur sum {val} is not in {{-1, 0, 1}}")
    return int(r)


def faithful_center_criterion(chi: int, table: CharacterTable, tol: float = 1e-9) -> bool:
    """False iff some a != e has chi(a) = +chi(1) or -chi(1)."""
    row = table.values[chi]
    d = row[0].real
    off = row[1:]
    hit = np.any(np.abs(off - d) < tol) or np.any(np.abs(off + d) < tol)
    return not bool(hit)


# -- symmetric groups -------------------------------------------------------

def _partition_of_label(label: str) -> tuple[int, ...]:
    return tuple(int(x) for x in label.strip("[]").split(","))


def sn_filter_set(n: int, t: ClassFunction) -> list[int]:
    """Characters of S_n with degree >= ||t||_2 / (8 sqrt(p(n)))."""
    g = t.group
    if g.kind != "symmetric" or g.params[0] != n:
        raise InputError("sn_filter_set needs a class function on symmetric(n)")
    thresh = math.sqrt(t.l2_norm_sq()) / (8.0 * math.sqrt(partition_count(n)))
    out = []
    for i, lab in enumerate(t.table.labels):
        if hook_length_degree(_partition_of_label(lab)) >= thresh:
            out.append(i)
    return out


def roichman_ratio_bound(degree: int, n: int, q: float, k: float, b: float) -> float:
    """Upper bound for max |chi(pi)|/chi(1) as a function of the degree.

    q, k, b are the unspecified absolute constants of the character-ratio
    estimate, supplied by the caller.
    """
    logfact = math.lgamma(n + 1)
    inner = (math.log(k) + logfact - math.log(degree) + 2 * n / math.e) / logfact
    return max(q, inner) ** b


def class_function_from_expression(table: CharacterTable, expr: str) -> ClassFunction:
    """Parse sums like ``2*delta_e+ind:r1`` or ``5*ind:1-one``.

    Names: delta_e, delta_e_scaled, one, ind:<class label or index>,
    chi:<char label or index>, re_chi:<char label or index>.
    """
    import re

    tokens = re.findall(r"([+-]?)\s*(?:([0-9.eE]+)\s*\*)?\s*([A-Za-z_]+(?::[^+\-\s]+)?)", expr.replace(" ", ""))
    if not tokens:
        raise InputError(f"cannot parse class function {expr!r}")
    total = np.zeros(table.group.num_classes, dtype=np.complex128)
    for sign, coef, name in tokens:
        c = float(coef) if coef else 1.0
        if sign == "-":
            c = -c
        total += c * _named(table, name).values
    return ClassFunction(table, total)


def _lookup(labels: Sequence[str], key: str) -> int:
    if key in labels:
        return list(labels).index(key)
    try:
        i = int(key)
    except ValueError:
        raise InputError(f"unknown label {key!r}") from None
    if not 0 <= i < len(labels):
        raise InputError(f"index {i} out of range")
    return i


def _named(table: CharacterTable, name: str) -> ClassFunction:
    base, _, arg = name.partition(":")
    if base == "delta_e":
        return delta_identity(table)
    if base == "delta_e_scaled":
        return delta_identity(table, scaled=True)
    if base == "one":
        return constant(table)
    if base == "ind":
        return indicator(table, [_lookup(table.group.class_labels, a) for a in arg.split("/")])
    if base == "chi":
        return character(table, _lookup(table.labels, arg))
    if base == "re_chi":
        return real_part_character(table, _lookup(table.labels, arg))
    raise InputError(f"unknown class function name {name!r}")
