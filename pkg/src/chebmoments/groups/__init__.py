"""Finite groups, character tables and class-function functionals."""

from .classfun import (
    ClassFunction,
    character,
    class_function_from_expression,
    constant,
    delta_identity,
    faithful_center_criterion,
    fourier_coeff,
    frobenius_schur,
    indicator,
    lambda_norm,
    real_part_character,
    roichman_ratio_bound,
    s_of_weights,
    s_t,
    s_t_with_class,
    sn_filter_set,
)
from .finite import (
    FiniteGroup,
    abelian,
    affine,
    cyclic,
    dihedral,
    explicit,
    from_ref,
    permutation_group,
    symmetric,
    units,
)
from .induction import (
    SubgroupEmbedding,
    induce,
    induce_explicit,
    induce_fourier,
    rotations_in_dihedral,
    units_subgroup,
)
from .symmetric import hook_length_degree, mn_character, partition_count
from .tables import CharacterTable, burnside_table, character_table

__all__ = [
    "CharacterTable", "ClassFunction", "FiniteGroup", "SubgroupEmbedding",
    "abelian", "affine", "burnside_table", "character", "character_table",
    "class_function_from_expression", "constant", "cyclic", "delta_identity",
    "dihedral", "explicit", "faithful_center_criterion", "fourier_coeff",
    "frobenius_schur", "from_ref", "hook_length_degree", "indicator", "induce",
    "induce_explicit", "induce_fourier", "lambda_norm", "mn_character",
    "partition_count", "permutation_group", "real_part_character",
    "roichman_ratio_bound", "rotations_in_dihedral", "s_of_weights", "s_t",
    "s_t_with_class", "sn_filter_set", "symmetric", "units", "units_subgroup",
]
