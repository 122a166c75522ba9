"""Character tables for the built-in group families."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import InputError, NumericError
from . import finite
from .finite import FiniteGroup
from .symmetric import mn_table

ORTHO_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CharacterTable:
    group: FiniteGroup
    values: np.ndarray  # shape (num chars, num classes), complex
    labels: tuple[str, ...]

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if v.shape != (self.group.num_classes, self.group.num_classes):
            raise InputError("character table must be square in the class count")

    @property
    def num_chars(self) -> int:
        return self.values.shape[0]

    @cached_property
    def sizes(self) -> np.ndarray:
        return np.asarray(self.group.class_sizes, dtype=np.float64)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(int(round(d)) for d in self.values[:, 0].real)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InputError(f"no character labelled {label!r}") from None

    def inner(self, f, g) -> complex:
        """<f, g> = (1/|G|) sum_g f(g) conj(g(g)) over classes."""
        return complex(np.sum(self.sizes * np.asarray(f) * np.conj(g)) / self.group.order)

    def orthogonality_residual(self) -> float:
        gram = (self.values * self.sizes) @ self.values.conj().T / self.group.order
        return float(np.max(np.abs(gram - np.eye(self.num_chars))))

    def column_residual(self) -> float:
        gram = self.values.conj().T @ self.values
        target = np.diag(self.group.order / self.sizes)
        return float(np.max(np.abs(gram - target)) / self.group.order)

    def validate(self, tol: float = ORTHO_TOL) -> None:
        first = self.values[:, 0]
        if np.max(np.abs(first.imag)) > tol or np.max(np.abs(first.real - np.round(first.real))) > 1e-8:
            raise NumericError("degrees are not positive integers")
        if min(self.degrees) < 1:
            raise NumericError("degrees are not positive integers")
        if sum(d * d for d in self.degrees) != self.group.order:
            raise NumericError("sum of squared degrees differs from the group order")
        res = self.orthogonality_residual()
        if res > tol:
            raise NumericError(f"row orthogonality residual {res:.3g} exceeds {tol}")


def _cyclic_table(g: FiniteGroup) -> CharacterTable:
    n = g.order
    j = np.arange(n)
    vals = np.exp(2j * np.pi * np.outer(j, j) / n)
    return CharacterTable(g, vals, tuple(f"chi{k}" for k in range(n)))


def _abelian_table(g: FiniteGroup) -> CharacterTable:
    factors = g.params
    elems = list(itertools.product(*(range(f) for f in factors)))
    E = np.array(elems, dtype=np.float64).reshape(len(elems), len(factors))
    F = np.array(factors, dtype=np.float64)
    phase = (E / F) @ E.T  # characters indexed by the same tuples
    vals = np.exp(2j * np.pi * phase)
    labels = tuple("chi(" + ",".join(map(str, e)) + ")" for e in elems)
    return CharacterTable(g, vals, labels)


def _dihedral_table(g: FiniteGroup) -> CharacterTable:
    n = g.params[0]
    half = (n - 1) // 2
    k = half + 2
    vals = np.zeros((k, k), dtype=np.complex128)
    vals[0, :] = 1
    vals[1, :] = 1
    vals[1, -1] = -1
    j = np.arange(half + 1)
    for h in range(1, half + 1):
        vals[h + 1, : half + 1] = 2 * np.cos(2 * np.pi * h * j / n)
        vals[h + 1, -1] = 0
    labels = ("1", "psi") + tuple(f"chi{h}" for h in range(1, half + 1))
    return CharacterTable(g, vals, labels)


def dirichlet_values_mod_p(p: int) -> np.ndarray:
    """Rows k = 0..p-2: chi_k(c) for c = 0..p-1, chi_k(g^a) = e(a k/(p-1))."""
    gen = finite.primitive_root(p)
    log = {}
    x = 1
    for a in range(p - 1):
        log[x] = a
        x = (x * gen) % p
    vals = np.zeros((p - 1, p), dtype=np.complex128)
    for k in range(p - 1):
        for c in range(1, p):
            vals[k, c] = np.exp(2j * np.pi * log[c] * k / (p - 1))
    return vals


def _affine_table(g: FiniteGroup) -> CharacterTable:
    p = g.params[0]
    dv = dirichlet_values_mod_p(p)
    vals = np.zeros((p, p), dtype=np.complex128)
    # classes: 0 Id, 1 U, c = 2..p-1 T_c
    for k in range(p - 1):
        vals[k, 0] = 1
        vals[k, 1] = 1
        vals[k, 2:] = dv[k, 2:]
    vals[p - 1, 0] = p - 1
    vals[p - 1, 1] = -1
    labels = tuple(f"psi{k}" for k in range(p - 1)) + ("theta",)
    return CharacterTable(g, vals, labels)


def _symmetric_table(g: FiniteGroup) -> CharacterTable:
    chars, _classes, values = mn_table(g.params[0])
    labels = tuple("[" + ",".join(map(str, lam)) + "]" for lam in chars)
    return CharacterTable(g, np.array(values, dtype=np.complex128), labels)


def class_structure_constants(g: FiniteGroup) -> np.ndarray:
    """c[r, s, t] = #{(x, y) in C_r x C_s : x y = z_t} for a fixed z_t in C_t."""
    el = g.elements
    k = g.num_classes
    c = np.zeros((k, k, k), dtype=np.int64)
    xs = np.arange(el.order)
    for t in range(k):
        z = int(np.flatnonzero(el.class_of == t)[0])
        ys = el.mult[el.inverse[xs], z]
        np.add.at(c[:, :, t], (el.class_of[xs], el.class_of[ys]), 1)
    return c


def burnside_table(g: FiniteGroup, seed: int = 0) -> CharacterTable:
    """Characters as common eigenvectors of the class multiplication matrices."""
    k = g.num_classes
    sizes = np.asarray(g.class_sizes, dtype=np.float64)
    consts = class_structure_constants(g).astype(np.float64)
    rng = np.random.default_rng(seed)
    for _attempt in range(8):
        coef = rng.standard_normal(k)
        M = np.einsum("r,rst->st", coef, consts)
        w, V = np.linalg.eig(M)
        gaps = np.abs(w[:, None] - w[None, :]) + np.eye(k) * 1e9
        if k == 1 or gaps.min() > 1e-6 * max(1.0, np.abs(w).max()):
            break
    else:
        raise NumericError("could not separate the class algebra eigenvalues")
    rows = []
    for i in range(k):
        omega = V[:, i] / V[0, i]
        deg2 = g.order / np.sum(np.abs(omega) ** 2 / sizes)
        deg = np.sqrt(deg2.real)
        rows.append(omega * deg / sizes)
    vals = np.array(rows)
    deg_int = np.round(vals[:, 0].real)
    vals[:, 0] = deg_int
    # canonical order: trivial first, then by degree and rounded values
    key = [(int(d), tuple(np.round(r.real, 8)), tuple(np.round(r.imag, 8)))
           for d, r in zip(deg_int, vals)]
    triv = int(np.argmin([np.max(np.abs(r - 1)) for r in vals]))
    order = [triv] + sorted((i for i in range(k) if i != triv), key=lambda i: key[i])
    vals = vals[order]
    if g.class_sizes == (1,) * k:
        vals = _snap_roots_of_unity(vals, g.order)
    return CharacterTable(g, vals, tuple(f"X{i}" for i in range(k)))


def _snap_roots_of_unity(vals: np.ndarray, n: int) -> np.ndarray:
    ang = np.angle(vals) * n / (2 * np.pi)
    return np.exp(2j * np.pi * np.round(ang) / n)


def _units_table(g: FiniteGroup) -> CharacterTable:
    t = burnside_table(g)
    # order nontrivial characters by their exponent vectors for a stable indexing
    n = g.order
    ks = np.mod(np.round(np.angle(t.values) * n / (2 * np.pi)), n).astype(int)
    order = [0] + sorted(range(1, n), key=lambda i: tuple(ks[i]))
    vals = t.values[order]
    return CharacterTable(g, vals, tuple(f"chi{i}" for i in range(n)))


def character_table(g: FiniteGroup) -> CharacterTable:
    return _cached_table(g)


_TABLE_CACHE: dict[int, tuple[FiniteGroup, CharacterTable]] = {}


def _cached_table(g: FiniteGroup) -> CharacterTable:
    hit = _TABLE_CACHE.get(id(g))
    if hit is not None and hit[0] is g:
        return hit[1]
    builders = {
        "cyclic": _cyclic_table,
        "abelian": _abelian_table,
        "dihedral": _dihedral_table,
        "affine": _affine_table,
        "symmetric": _symmetric_table,
        "units": _units_table,
        "explicit": burnside_table,
    }
    if g.kind not in builders:
        raise InputError(f"unsupported group kind {g.kind!r}")
    t = builders[g.kind](g)
    t.validate()
    _TABLE_CACHE[id(g)] = (g, t)
    return t


def compatible(a: CharacterTable, b: CharacterTable) -> bool:
    """Same group description and identical character values."""
    if a is b:
        return True
    return (a.group.ref == b.group.ref and a.group.class_sizes == b.group.class_sizes
            and a.values.shape == b.values.shape and np.array_equal(a.values, b.values))
