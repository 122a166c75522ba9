"""Artin conductor exponents from ramification filtrations, and the bounds around them.

Filtrations are data. Built-ins cover Q(zeta_q)/Q, quadratic fields and the
Kummer fields Q(zeta_p, a^(1/p)); anything else is read from a filtration file::

    prime <label> <residue characteristic> [norm <N>]
    level <i> <element id> <element id> ...
    level <j> ...
    end

A ``level i`` record fixes G_k for i <= k < (next listed level). The last
listed group must be trivial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

import numpy as np

from .errors import DataFormatError, InputError, NumericError
from .groups import finite
from .groups.classfun import s_of_weights
from .groups.finite import FiniteGroup
from .groups.tables import CharacterTable, character_table

INTEGER_TOL = 1e-8


@dataclass(frozen=True)
class RamificationFiltration:
    label: str
    residue_char: int
    levels: tuple[tuple[int, frozenset[int]], ...]  # (first index, G_i) jumps, ascending
    norm: int | None = None  # N(p) as a positive integer; defaults to the residue characteristic

    def group_at(self, i: int) -> frozenset[int]:
        cur = self.levels[0][1]
        for start, grp in self.levels:
            if start > i:
                break
            cur = grp
        return cur

    @property
    def inertia(self) -> frozenset[int]:
        return self.levels[0][1]

    @property
    def ideal_norm(self) -> int:
        return self.norm if self.norm is not None else self.residue_char

    def validate(self, g: FiniteGroup) -> None:
        if not self.levels or self.levels[0][0] != 0:
            raise InputError(f"filtration at {self.label} must start at level 0")
        el = g.elements
        prev = None
        last_start = -1
        for start, grp in self.levels:
            if start <= last_start:
                raise InputError("filtration levels must increase")
            last_start = start
            ids = np.array(sorted(grp), dtype=np.int64)
            if ids.size == 0 or el.identity not in grp:
                raise InputError(f"level {start} at {self.label} does not contain the identity")
            if ids.min() < 0 or ids.max() >= g.order:
                raise InputError(f"level {start} at {self.label} has element ids out of range")
            prods = set(el.mult[np.ix_(ids, ids)].ravel().tolist())
            if not prods <= grp:
                raise InputError(f"level {start} at {self.label} is not a subgroup")
            if prev is not None and (not grp <= prev or len(prev) % len(grp)):
                raise InputError(f"level {start} at {self.label} is not a subgroup of the previous level")
            prev = grp
        if len(prev) != 1:
            raise InputError(f"filtration at {self.label} never becomes trivial")


def _codim_fixed(values: np.ndarray, class_of: np.ndarray, grp: frozenset[int], degree: int) -> float:
    ids = np.fromiter(grp, dtype=np.int64)
    return degree - float(np.sum(values[class_of[ids]]).real) / len(ids)


def conductor_exponent(filt: RamificationFiltration, chi: int, table: CharacterTable) -> int:
    """sum_i |G_i|/|G_0| * codim V^{G_i}."""
    g = table.group
    filt.validate(g)
    class_of = g.elements.class_of
    deg = table.degrees[chi]
    row = table.values[chi]
    g0 = len(filt.inertia)
    total = 0.0
    starts = [s for s, _ in filt.levels]
    for k, (start, grp) in enumerate(filt.levels):
        if len(grp) == 1:
            break
        stop = starts[k + 1]
        total += (stop - start) * len(grp) / g0 * _codim_fixed(row, class_of, grp, deg)
    n = round(total)
    if abs(total - n) > INTEGER_TOL:
        raise NumericError(f"conductor exponent {total} at {filt.label} is not an integer")
    return int(n)


@dataclass(frozen=True, eq=False)
class ConductorData:
    table: CharacterTable
    filtrations: tuple[RamificationFiltration, ...]
    exponents: tuple[dict[str, int], ...]  # per character
    log_A: tuple[float, ...]
    base_degree: int = 1
    log_dK: float = 0.0
    log_rd_L: float | None = None
    description: str = ""

    def exponent_sum(self, label: str) -> int:
        """sum_chi chi(1) n(chi, p): the exponent of p in the relative discriminant."""
        return sum(d * e[label] for d, e in zip(self.table.degrees, self.exponents))


def conductor_data(table: CharacterTable, filtrations: Sequence[RamificationFiltration],
                   base_degree: int = 1, log_dK: float = 0.0, log_rd_L: float | None = None,
                   description: str = "") -> ConductorData:
    exps = []
    for chi in range(table.num_chars):
        exps.append({f.label: conductor_exponent(f, chi, table) for f in filtrations})
    data = ConductorData(table, tuple(filtrations), tuple(exps), (), base_degree, log_dK, None, description)
    logs = tuple(artin_A(data, chi) for chi in range(table.num_chars))
    if log_rd_L is None and base_degree == 1:
        # conductor-discriminant formula over Q
        log_dL = sum(d * la for d, la in zip(table.degrees, logs))
        log_rd_L = log_dL / table.group.order
    return ConductorData(table, tuple(filtrations), tuple(exps), logs, base_degree, log_dK,
                         log_rd_L, description)


def artin_A(data: ConductorData, chi: int) -> float:
    """log A(chi) = chi(1) log d_K + sum_p n(chi, p) log N(p)."""
    if not 0 <= chi < data.table.num_chars:
        raise InputError("character index out of range")
    total = data.table.degrees[chi] * data.log_dK
    for f in data.filtrations:
        if f.label not in data.exponents[chi]:
            raise InputError(f"missing exponent at ramified prime {f.label}")
        total += data.exponents[chi][f.label] * math.log(f.ideal_norm)
    return total


# -- bounds ----------------------------------------------------------------------

@dataclass(frozen=True)
class PointwiseBounds:
    lower: float
    upper: float
    ratio_lhs: float  # log(A+2) / log log((A+2)^{3/(chi(1)[K:Q])})
    ratio_rhs: float  # [K:Q] chi(1) log(rd+2) / log log(rd+2), up to an absolute constant


def pointwise_bounds(degree: int, log_rd_L: float, base_degree: int = 1,
                     log_A: float | None = None) -> PointwiseBounds:
    lower = max(1.0, base_degree / 2) * degree
    upper = 2.0 * degree * base_degree * log_rd_L
    rd = math.exp(log_rd_L)
    rhs = base_degree * degree * math.log(rd + 2) / math.log(math.log(rd + 2))
    lhs = float("nan")
    if log_A is not None:
        logA2 = math.log(math.exp(log_A) + 2) if log_A < 700 else log_A
        inner = 3.0 / (degree * base_degree) * logA2
        lhs = logA2 / math.log(inner) if inner > 1 else float("inf")
    return PointwiseBounds(lower, upper, lhs, rhs)


def averaged_bounds(c, table: CharacterTable) -> tuple[float, float]:
    """Bracket for sum c_chi log A(chi) / ([K:Q] log rd_L)."""
    c = np.asarray(c, dtype=float)
    s, _ = s_of_weights(table, c)
    base = float(np.sum(np.asarray(table.degrees, dtype=float) * c))
    return (1 - s) * base, (1 + s) * base


def averaged_value(c, data: ConductorData) -> float:
    c = np.asarray(c, dtype=float)
    return float(np.dot(c, data.log_A)) / (data.base_degree * data.log_rd_L)


# -- built-in filtrations -----------------------------------------------------------

def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def cyclotomic_filtrations(q: int) -> tuple[FiniteGroup, list[RamificationFiltration]]:
    """Q(zeta_q)/Q with Galois group (Z/q)^x (a acting by zeta -> zeta^a).

    At p | q, q = p^k m: G_0 = {a = 1 mod m}, and G_i = {a = 1 mod m, a = 1 mod p^j}
    for p^(j-1) <= i <= p^j - 1.
    """
    g = finite.units(q)
    res = finite.residues(g)
    out = []
    for p, k in _factor(q).items():
        if p == 2 and k == 1:
            continue  # q = 2m with m odd: Q(zeta_q) = Q(zeta_m)
        m = q // p**k
        levels = [(0, frozenset(i for i, a in enumerate(res) if a % m == 1 % m))]
        for j in range(1, k + 1):
            grp = frozenset(i for i, a in enumerate(res) if a % m == 1 % m and a % p**j == 1 % p**j)
            levels.append((p ** (j - 1), grp))
        # merge repeated groups (p = 2, j = 1 gives the same group as level 0)
        merged = []
        for start, grp in levels:
            if merged and merged[-1][1] == grp:
                continue
            merged.append((start, grp))
        if len(merged[-1][1]) != 1:
            merged.append((p**k, frozenset([g.elements.identity])))
        out.append(RamificationFiltration(str(p), p, tuple(merged)))
    return g, out


def quadratic_discriminant(d: int) -> int:
    if d in (0, 1) or any(e > 1 for e in _factor(abs(d)).values()):
        raise InputError("quadratic field needs a squarefree d != 0, 1")
    return d if d % 4 == 1 else 4 * d


def quadratic_filtrations(d: int) -> tuple[FiniteGroup, list[RamificationFiltration]]:
    D = quadratic_discriminant(d)
    g = finite.cyclic(2)
    full, triv = frozenset({0, 1}), frozenset({0})
    out = []
    for p in sorted(_factor(abs(D))):
        if p != 2:
            levels = ((0, full), (1, triv))
        elif d % 4 == 3:
            levels = ((0, full), (2, triv))
        else:  # d = 2 mod 4
            levels = ((0, full), (3, triv))
        out.append(RamificationFiltration(str(p), p, levels))
    return g, out


def kummer_filtrations(a: int, p: int) -> tuple[FiniteGroup, list[RamificationFiltration]]:
    """Q(zeta_p, a^(1/p))/Q, Galois group Aff(F_p).

    Supported when a is squarefree, p does not divide a, and a^(p-1) != 1 mod p^2,
    so that p is totally and wildly ramified. Then at p: G_0 = G, G_1 = translations,
    G_2 = 1; at l | a: G_0 = translations, G_1 = 1.
    """
    if not finite.is_prime(p) or p < 3:
        raise InputError("kummer(a, p) needs an odd prime p")
    fa = _factor(abs(a))
    if a in (0, 1, -1) or any(e > 1 for e in fa.values()) or p in fa:
        raise InputError("kummer(a, p) needs squarefree a coprime to p, a != 0, +-1")
    if pow(a % (p * p), p - 1, p * p) == 1:
        raise InputError("kummer(a, p) with a^(p-1) = 1 mod p^2 is not a built-in case")
    g = finite.affine(p)
    allg = frozenset(range(g.order))
    trans = frozenset(range(p))  # c = 1, id = d
    triv = frozenset({0})
    out = [RamificationFiltration(str(p), p, ((0, allg), (1, trans), (2, triv)))]
    for ell in sorted(fa):
        out.append(RamificationFiltration(str(ell), ell, ((0, trans), (1, triv))))
    out.sort(key=lambda f: f.residue_char)
    return g, out


def builtin_conductors(ext: str) -> ConductorData:
    """``cyclotomic:q``, ``quadratic:d`` or ``kummer:a,p``."""
    kind, _, rest = ext.partition(":")
    try:
        args = [int(x) for x in rest.split(",") if x]
        if kind == "cyclotomic":
            g, filts = cyclotomic_filtrations(args[0])
        elif kind == "quadratic":
            g, filts = quadratic_filtrations(args[0])
        elif kind == "kummer":
            g, filts = kummer_filtrations(args[0], args[1])
        else:
            raise InputError(f"unknown extension kind {kind!r}")
    except (IndexError, ValueError) as exc:
        raise InputError(f"bad extension descriptor {ext!r}: {exc}") from None
    return conductor_data(character_table(g), filts, description=ext)


# -- Dirichlet conductors (independent oracle) ------------------------------------

def dirichlet_conductor(q: int, values: dict[int, complex], tol: float = 1e-9) -> int:
    """Smallest d | q such that chi(a) = 1 whenever a = 1 mod d (a coprime to q)."""
    for d in sorted(x for x in range(1, q + 1) if q % x == 0):
        if all(abs(v - 1) < tol for a, v in values.items() if a % d == 1 % d):
            return d
    return q


# -- file format -------------------------------------------------------------------

def load_filtrations(src: TextIO) -> list[RamificationFiltration]:
    out = []
    cur = None
    levels: list[tuple[int, frozenset[int]]] = []
    for n, raw in enumerate(src, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        w = line.split()
        try:
            if w[0] == "prime":
                if cur is not None:
                    raise DataFormatError(f"line {n}: 'prime' before 'end'")
                norm = int(w[4]) if len(w) >= 5 and w[3] == "norm" else None
                cur = (w[1], int(w[2]), norm)
                levels = []
            elif w[0] == "level":
                if cur is None:
                    raise DataFormatError(f"line {n}: 'level' outside a prime block")
                levels.append((int(w[1]), frozenset(int(x) for x in w[2:])))
            elif w[0] == "end":
                if cur is None:
                    raise DataFormatError(f"line {n}: 'end' without 'prime'")
                out.append(RamificationFiltration(cur[0], cur[1], tuple(levels), cur[2]))
                cur = None
            else:
                raise DataFormatError(f"line {n}: unknown record {w[0]!r}")
        except (IndexError, ValueError) as exc:
            raise DataFormatError(f"line {n}: {exc}") from None
    if cur is not None:
        raise DataFormatError("missing 'end' after the last prime block")
    return out


def dump_filtrations(filts: Iterable[RamificationFiltration], out: TextIO) -> None:
    for f in filts:
        extra = f" norm {f.norm}" if f.norm is not None else ""
        out.write(f"prime {f.label} {f.residue_char}{extra}\n")
        for start, grp in f.levels:
            out.write(f"level {start} " + " ".join(map(str, sorted(grp))) + "\n")
        out.write("end\n")
