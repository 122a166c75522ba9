"""Finite groups described at the level of conjugacy classes.

Every group carries its class sizes and labels. Groups that are small
enough also carry element-level data (a multiplication table), which is
what explicit induction, ramification filtrations and the brute-force
checks need.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from ..errors import InputError

MAX_EXPLICIT_ORDER = 2000
MAX_SYMMETRIC_DEGREE = 12


@dataclass(frozen=True, eq=False)
class ElementData:
    """Multiplication table plus derived per-element data."""

    mult: np.ndarray  # mult[a, b] = id of a*b
    inverse: np.ndarray
    identity: int
    class_of: np.ndarray
    labels: tuple[str, ...] | None = None

    @property
    def order(self) -> int:
        return self.mult.shape[0]

    def conj(self, a: int, g) -> np.ndarray:
        """a^-1 g a (vectorised over g)."""
        return self.mult[self.mult[self.inverse[a], g], a]

    def power(self, g: int, m: int) -> int:
        r = self.identity
        for _ in range(m):
            r = int(self.mult[r, g])
        return r


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    kind: str
    params: tuple
    order: int
    class_sizes: tuple[int, ...]
    class_labels: tuple[str, ...]
    _square: tuple[int, ...] | None = None
    _power: Callable[[int, int], int] | None = field(default=None, repr=False)
    _elements: Callable[[], ElementData] | None = field(default=None, repr=False)

    def __post_init__(self):
        if sum(self.class_sizes) != self.order:
            raise InputError("class sizes do not sum to the group order")
        if self.class_sizes[0] != 1:
            raise InputError("class 0 must be the identity class")

    @property
    def num_classes(self) -> int:
        return len(self.class_sizes)

    @property
    def ref(self) -> str:
        """Compact textual reference, e.g. ``dihedral:5``."""
        if not self.params:
            return self.kind
        return self.kind + ":" + ",".join(str(p) for p in self.params)

    @property
    def has_elements(self) -> bool:
        return self._elements is not None

    @cached_property
    def elements(self) -> ElementData:
        if self._elements is None:
            raise InputError(f"{self.ref} has no element-level data")
        return self._elements()

    def power_class(self, c: int, m: int) -> int:
        """Class of g^m for g in class c."""
        if m == 0:
            return 0
        if self._power is not None:
            return self._power(c, m)
        el = self.elements
        rep = int(np.flatnonzero(el.class_of == c)[0])
        return int(el.class_of[el.power(rep, m)])

    @cached_property
    def square_map(self) -> tuple[int, ...]:
        if self._square is not None:
            return self._square
        return tuple(self.power_class(c, 2) for c in range(self.num_classes))

    def class_index(self, label: str) -> int:
        try:
            return self.class_labels.index(label)
        except ValueError:
            raise InputError(f"{self.ref} has no class labelled {label!r}") from None


def _classes_from_table(mult: np.ndarray, inverse: np.ndarray, identity: int):
    n = mult.shape[0]
    class_of = np.full(n, -1, dtype=np.int64)
    order = [identity] + [g for g in range(n) if g != identity]
    k = 0
    all_g = np.arange(n)
    for x in order:
        if class_of[x] >= 0:
            continue
        orbit = np.unique(mult[mult[inverse, x], all_g])
        class_of[orbit] = k
        k += 1
    return class_of


def _check_table(mult: np.ndarray) -> tuple[np.ndarray, int]:
    n = mult.shape[0]
    if mult.shape != (n, n) or n == 0:
        raise InputError("multiplication table must be square and non-empty")
    if n > MAX_EXPLICIT_ORDER:
        raise InputError(f"explicit groups are limited to order {MAX_EXPLICIT_ORDER}")
    if mult.min() < 0 or mult.max() >= n:
        raise InputError("multiplication table entries out of range")
    target = np.arange(n)
    for row in (mult, mult.T):
        if not np.all(np.sort(row, axis=1) == target):
            raise InputError("multiplication table is not a Latin square")
    ids = [e for e in range(n) if np.array_equal(mult[e], target)]
    if not ids or not np.array_equal(mult[:, ids[0]], target):
        raise InputError("multiplication table has no identity")
    e = ids[0]
    rng = np.random.default_rng(0)
    if n <= 64:
        a, b, c = (x.ravel() for x in np.meshgrid(target, target, target, indexing="ij"))
    else:
        a, b, c = rng.integers(0, n, size=(3, 20000))
    if not np.array_equal(mult[mult[a, b], c], mult[a, mult[b, c]]):
        raise InputError("multiplication table is not associative")
    inverse = np.argmax(mult == e, axis=1)
    return inverse, e


def _element_data(mult, labels=None) -> ElementData:
    mult = np.ascontiguousarray(mult, dtype=np.int64)
    inverse, e = _check_table(mult)
    class_of = _classes_from_table(mult, inverse, e)
    return ElementData(mult, inverse, e, class_of, labels)


def explicit(mult, labels: Sequence[str] | None = None, kind: str = "explicit",
             params: tuple = ()) -> FiniteGroup:
    """Group given by a multiplication table (ids 0..N-1)."""
    el = _element_data(np.asarray(mult), tuple(labels) if labels else None)
    k = int(el.class_of.max()) + 1
    sizes = tuple(int(np.sum(el.class_of == c)) for c in range(k))
    reps = [int(np.flatnonzero(el.class_of == c)[0]) for c in range(k)]
    if labels:
        clabels = tuple(str(labels[r]) for r in reps)
    else:
        clabels = tuple(f"c{c}" for c in range(k))
    return FiniteGroup(kind, params, el.order, sizes, clabels, _elements=lambda: el)


def _table_from_op(elements: list, op) -> np.ndarray:
    index = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    mult = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            mult[i, j] = index[op(a, b)]
    return mult


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise InputError("cyclic(n) needs n >= 1")
    idx = np.arange(n)
    mult = (idx[:, None] + idx[None, :]) % n

    def build():
        return ElementData(mult, (-idx) % n, 0, idx.copy(), tuple(f"g^{j}" for j in range(n)))

    return FiniteGroup("cyclic", (n,), n, (1,) * n, tuple(f"g^{j}" for j in range(n)),
                       _power=lambda c, m: (c * m) % n, _elements=build)


def abelian(factors: Sequence[int]) -> FiniteGroup:
    factors = tuple(int(f) for f in factors)
    if not factors or any(f < 1 for f in factors):
        raise InputError("abelian group needs positive invariant factors")
    elems = list(itertools.product(*(range(f) for f in factors)))
    labels = tuple("(" + ",".join(map(str, x)) + ")" for x in elems)
    index = {x: i for i, x in enumerate(elems)}

    def power(c, m):
        return index[tuple((v * m) % f for v, f in zip(elems[c], factors))]

    def build():
        mult = _table_from_op(elems, lambda a, b: tuple((x + y) % f for x, y, f in zip(a, b, factors)))
        return _element_data(mult, labels)

    n = len(elems)
    return FiniteGroup("abelian", factors, n, (1,) * n, labels, _power=power, _elements=build)


def dihedral(n: int) -> FiniteGroup:
    """D_n of order 2n for odd n >= 3; element id r + n*s is sigma^r tau^s."""
    if n < 3 or n % 2 == 0:
        raise InputError("dihedral(n) needs odd n >= 3")
    half = (n - 1) // 2
    sizes = (1,) + (2,) * half + (n,)
    labels = ("e",) + tuple(f"r{j}" for j in range(1, half + 1)) + ("s",)

    def rot_class(r):
        r %= n
        return 0 if r == 0 else min(r, n - r)

    def power(c, m):
        if c == half + 1:
            return 0 if m % 2 == 0 else c
        return rot_class(c * m)

    def build():
        elems = [(r, s) for s in range(2) for r in range(n)]

        def op(a, b):
            return ((a[0] + (-1) ** a[1] * b[0]) % n, (a[1] + b[1]) % 2)

        el = _element_data(_table_from_op(elems, op),
                           tuple(f"r^{r}" + ("t" if s else "") for r, s in elems))
        # reorder class ids to the canonical labelling
        class_of = np.array([rot_class(r) if s == 0 else half + 1 for r, s in elems])
        return ElementData(el.mult, el.inverse, el.identity, class_of, el.labels)

    return FiniteGroup("dihedral", (n,), 2 * n, sizes, labels, _power=power, _elements=build)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


def primitive_root(p: int) -> int:
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    if p == 2:
        return 1
    phi = p - 1
    qs = {d for d in range(2, phi + 1) if phi % d == 0 and is_prime(d)}
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in qs):
            return g
    raise AssertionError("unreachable")


def affine(p: int) -> FiniteGroup:
    """Aff(F_p): maps x -> c x + d, id (c-1)*p + d. Classes: Id, U, T_2..T_{p-1}."""
    if p < 3 or not is_prime(p):
        raise InputError("affine(p) needs an odd prime p")
    sizes = (1, p - 1) + (p,) * (p - 2)
    labels = ("Id", "U") + tuple(f"T{c}" for c in range(2, p))

    def power(cls, m):
        if cls <= 1:
            return 0 if (cls == 0 or m % p == 0) else 1
        c = pow(cls, m, p)  # class T_c sits at index c
        return 0 if c == 1 else c

    def build():
        elems = [(c, d) for c in range(1, p) for d in range(p)]

        def op(a, b):
            return ((a[0] * b[0]) % p, (a[0] * b[1] + a[1]) % p)

        el = _element_data(_table_from_op(elems, op), tuple(f"({c},{d})" for c, d in elems))
        class_of = np.array([_affine_class(c, d, p) for c, d in elems])
        return ElementData(el.mult, el.inverse, el.identity, class_of, el.labels)

    return FiniteGroup("affine", (p,), p * (p - 1), sizes, labels, _power=power, _elements=build)


def _affine_class(c: int, d: int, p: int) -> int:
    if c == 1:
        return 0 if d == 0 else 1
    return c  # T_c sits at index c (indices 2..p-1)


def partitions(n: int) -> list[tuple[int, ...]]:
    """Partitions of n as non-increasing tuples, in increasing lexicographic order."""
    out: list[tuple[int, ...]] = []

    def rec(rem, maxpart, acc):
        if rem == 0:
            out.append(tuple(acc))
            return
        for k in range(min(rem, maxpart), 0, -1):
            acc.append(k)
            rec(rem - k, k, acc)
            acc.pop()

    rec(n, n, [])
    return sorted(out)


def cycle_type_class_size(mu: Sequence[int]) -> int:
    n = sum(mu)
    denom = 1
    for k in set(mu):
        c = list(mu).count(k)
        denom *= k ** c * math.factorial(c)
    return math.factorial(n) // denom


def cycle_type_power(mu: Sequence[int], m: int) -> tuple[int, ...]:
    parts: list[int] = []
    for L in mu:
        g = math.gcd(L, m)
        parts.extend([L // g] * g)
    return tuple(sorted(parts, reverse=True))


def symmetric(n: int, max_degree: int = MAX_SYMMETRIC_DEGREE) -> FiniteGroup:
    """S_n with classes indexed by cycle type; class 0 is the identity."""
    if n < 1:
        raise InputError("symmetric(n) needs n >= 1")
    if n > max_degree:
        raise InputError(f"symmetric(n) limited to n <= {max_degree}")
    parts = partitions(n)
    index = {mu: i for i, mu in enumerate(parts)}
    sizes = tuple(cycle_type_class_size(mu) for mu in parts)
    labels = tuple("(" + ",".join(map(str, mu)) + ")" for mu in parts)

    def power(c, m):
        return index[cycle_type_power(parts[c], m)]

    return FiniteGroup("symmetric", (n,), math.factorial(n), sizes, labels, _power=power)


def cycle_type(perm: Sequence[int]) -> tuple[int, ...]:
    seen = [False] * len(perm)
    out = []
    for i in range(len(perm)):
        if not seen[i]:
            L = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                L += 1
            out.append(L)
    return tuple(sorted(out, reverse=True))


def permutation_group(n: int) -> FiniteGroup:
    """All of S_n as an explicit table, class labels are cycle types."""
    if math.factorial(n) > MAX_EXPLICIT_ORDER:
        raise InputError("permutation_group limited by the explicit order cap")
    perms = list(itertools.permutations(range(n)))
    mult = _table_from_op(perms, lambda a, b: tuple(a[b[i]] for i in range(n)))
    labels = ["(" + ",".join(map(str, cycle_type(p))) + ")" for p in perms]
    return explicit(mult, labels, kind="explicit", params=())


def units(q: int, subgroup: Sequence[int] | None = None) -> FiniteGroup:
    """(Z/qZ)^x, or a subgroup of it given by residues. Element ids follow sorted residues."""
    if q < 1:
        raise InputError("units(q) needs q >= 1")
    full = [a for a in range(q) if math.gcd(a, q) == 1] if q > 1 else [0]
    elems = sorted(set(int(a) % q for a in subgroup)) if subgroup is not None else full
    if any(math.gcd(a, q) != 1 for a in elems) and q > 1:
        raise InputError("subgroup residues must be units")
    index = {a: i for i, a in enumerate(elems)}
    n = len(elems)
    mult = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            r = (a * b) % q if q > 1 else 0
            if r not in index:
                raise InputError("residues do not form a subgroup")
            mult[i, j] = index[r]
    labels = tuple(str(a) for a in elems)
    params = (q,) if subgroup is None else (q, "/".join(labels))
    el = _element_data(mult, labels)

    def power(c, m):
        return index[pow(elems[c], m, q) if q > 1 else 0]

    return FiniteGroup("units", params, n, (1,) * n, labels, _power=power,
                       _elements=lambda: el)


def residues(group: FiniteGroup) -> list[int]:
    """Residues represented by a units(...) group, in element-id order."""
    if group.kind != "units":
        raise InputError("not a units group")
    return [int(s) for s in group.class_labels]


def from_ref(ref: str) -> FiniteGroup:
    """Parse ``kind:params`` (e.g. ``dihedral:5``, ``abelian:2,4``, ``units:8``)."""
    kind, _, rest = ref.partition(":")
    args = [a for a in rest.split(",") if a] if rest else []
    try:
        if kind == "cyclic":
            return cyclic(int(args[0]))
        if kind == "abelian":
            return abelian([int(a) for a in args])
        if kind == "dihedral":
            return dihedral(int(args[0]))
        if kind == "affine":
            return affine(int(args[0]))
        if kind == "symmetric":
            return symmetric(int(args[0]))
        if kind == "units":
            if len(args) > 1:
                return units(int(args[0]), [int(a) for a in args[1].split("/")])
            return units(int(args[0]))
        if kind == "trivial":
            return cyclic(1)
    except (IndexError, ValueError) as exc:
        raise InputError(f"bad group reference {ref!r}: {exc}") from None
    raise InputError(f"unsupported group kind {kind!r}")
