"""Subgroup embeddings and induction of class functions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InputError, NumericError
from . import finite
from .classfun import ClassFunction
from .tables import CharacterTable, character_table, compatible

INDUCE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SubgroupEmbedding:
    """G inside G+, described by restriction multiplicities.

    ``restriction[i, j]`` is the multiplicity of the j-th irreducible of G
    in the restriction of the i-th irreducible of G+. ``element_map``, when
    present, sends element ids of G to element ids of G+.
    """

    sub: CharacterTable
    ambient: CharacterTable
    restriction: np.ndarray
    element_map: np.ndarray | None = None

    def __post_init__(self):
        R = np.asarray(self.restriction, dtype=np.int64)
        object.__setattr__(self, "restriction", R)
        if R.shape != (self.ambient.num_chars, self.sub.num_chars) or np.any(R < 0):
            raise InputError("restriction table has the wrong shape or negative entries")
        if self.ambient.group.order % self.sub.group.order:
            raise InputError("subgroup order does not divide the ambient order")
        if not np.array_equal(R @ np.array(self.sub.degrees), np.array(self.ambient.degrees)):
            raise InputError("restriction multiplicities are inconsistent with the degrees")

    @property
    def index(self) -> int:
        return self.ambient.group.order // self.sub.group.order

    @classmethod
    def identity(cls, table: CharacterTable) -> "SubgroupEmbedding":
        emap = np.arange(table.group.order) if table.group.has_elements else None
        return cls(table, table, np.eye(table.num_chars, dtype=np.int64), emap)

    @classmethod
    def trivial_subgroup(cls, ambient: CharacterTable) -> "SubgroupEmbedding":
        sub = character_table(finite.cyclic(1))
        R = np.array(ambient.degrees, dtype=np.int64).reshape(-1, 1)
        emap = None
        if ambient.group.has_elements:
            emap = np.array([ambient.group.elements.identity])
        return cls(sub, ambient, R, emap)

    @classmethod
    def from_element_map(cls, sub: CharacterTable, ambient: CharacterTable,
                         element_map) -> "SubgroupEmbedding":
        emap = np.asarray(element_map, dtype=np.int64)
        gs, ga = sub.group, ambient.group
        es, ea = gs.elements, ga.elements
        if emap.shape != (gs.order,) or len(set(emap.tolist())) != gs.order:
            raise InputError("element map must be injective on the subgroup")
        # homomorphism check
        lhs = emap[es.mult]
        rhs = ea.mult[emap[:, None], emap[None, :]]
        if not np.array_equal(lhs, rhs):
            raise InputError("element map is not a homomorphism")
        fusion = np.array([ea.class_of[emap[int(np.flatnonzero(es.class_of == c)[0])]]
                           for c in range(gs.num_classes)])
        restricted = ambient.values[:, fusion]  # chi|_G on G-classes
        mult = (restricted * sub.sizes) @ sub.values.conj().T / gs.order
        R = np.round(mult.real)
        if np.max(np.abs(mult - R)) > 1e-8:
            raise NumericError("restriction multiplicities are not integers")
        return cls(sub, ambient, R.astype(np.int64), emap)


def induce_fourier(t: ClassFunction, emb: SubgroupEmbedding) -> ClassFunction:
    """Frobenius reciprocity: t+^(chi) = sum_psi <chi|_G, psi> t^(psi)."""
    if not compatible(t.table, emb.sub):
        raise InputError("class function is not on the embedded subgroup")
    coeffs = emb.restriction @ t.fourier
    return ClassFunction.from_fourier(emb.ambient, coeffs)


def induce_explicit(t: ClassFunction, emb: SubgroupEmbedding) -> ClassFunction:
    """t+(g) = (1/|G|) sum over a in G+ with a^-1 g a in G of t(a^-1 g a)."""
    if emb.element_map is None:
        raise InputError("embedding carries no element data")
    gs, ga = emb.sub.group, emb.ambient.group
    es, ea = gs.elements, ga.elements
    # value of t on each ambient element (zero off the subgroup)
    on_ambient = np.zeros(ga.order, dtype=np.complex128)
    on_ambient[emb.element_map] = t.values[es.class_of]
    out = np.zeros(ga.num_classes, dtype=np.complex128)
    allg = np.arange(ga.order)
    for c in range(ga.num_classes):
        g = int(np.flatnonzero(ea.class_of == c)[0])
        conj = ea.mult[ea.mult[ea.inverse[allg], g], allg]
        out[c] = on_ambient[conj].sum() / gs.order
    return ClassFunction(emb.ambient, out)


def induce(t: ClassFunction, emb: SubgroupEmbedding) -> ClassFunction:
    """Induced class function; cross-checked against the direct formula when possible."""
    tp = induce_fourier(t, emb)
    if emb.element_map is not None:
        direct = induce_explicit(t, emb)
        err = float(np.max(np.abs(direct.values - tp.values)))
        scale = max(1.0, float(np.max(np.abs(tp.values))))
        if err > INDUCE_TOL * scale:
            raise NumericError(f"induction paths disagree by {err:.3g}")
    return tp


def rotations_in_dihedral(n: int) -> SubgroupEmbedding:
    """C_n as the rotation subgroup of D_n."""
    sub = character_table(finite.cyclic(n))
    amb = character_table(finite.dihedral(n))
    return SubgroupEmbedding.from_element_map(sub, amb, np.arange(n))


def units_subgroup(q: int, residues) -> SubgroupEmbedding:
    """A subgroup H of (Z/q)^x inside (Z/q)^x, i.e. Gal(Q(zeta_q)/K) in Gal(Q(zeta_q)/Q)."""
    gh = finite.units(q, residues)
    gq = finite.units(q)
    full = finite.residues(gq)
    emap = [full.index(r) for r in finite.residues(gh)]
    return SubgroupEmbedding.from_element_map(character_table(gh), character_table(gq), emap)
