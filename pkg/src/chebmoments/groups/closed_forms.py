"""Exact rational values for the dihedral and affine families.

These serve as regression targets for the floating-point functionals.
"""

from __future__ import annotations

from fractions import Fraction


def dihedral_s_scaled_identity(n: int) -> Fraction:
    """S for t = |D_n| 1_e."""
    return Fraction(1, 2 * n - 1)


def dihedral_s_rotation_pair(n: int) -> Fraction:
    """S for t = 1_{sigma, sigma^-1}."""
    return Fraction(n - 2, 2 * (n - 1))


def dihedral_s_mixed(n: int) -> Fraction:
    """S for t = 2*1_e + 1_{sigma, sigma^-1}; the max sits at the class of sigma."""
    return Fraction(2 * n - 4, 3 * n - 4)


def dihedral_lambdas_scaled_identity(n: int) -> dict[tuple[int, int], int]:
    # t^(chi) = chi(1): two linear characters and (n-1)/2 of degree 2
    half = (n - 1) // 2
    return {(1, 1): 2 + 4 * half, (1, 2): 2 + 8 * half, (1, 4): 2 + 32 * half}


def affine_s_scaled_identity(p: int) -> Fraction:
    """S for t = |G| 1_e on Aff(F_p); the max sits at the unipotent class U."""
    return Fraction(p - 2, p * p - 2 * p + 2)


def affine_s_theta(p: int) -> Fraction:
    return Fraction(1, p - 1)


def affine_lambdas(p: int) -> dict[str, int]:
    return {
        "l11_scaled_identity": p * (p - 1),
        "l12_scaled_identity": (p - 1) * (1 + (p - 1) ** 2),
        "l14_scaled_identity": (p - 1) * (1 + (p - 1) ** 4),
        "l12_theta": p - 1,
        "l14_theta": p - 1,
    }


def kummer_discriminant(a: int, p: int) -> tuple[int, int]:
    """Exponents (of p, of a) in the absolute discriminant of Q(zeta_p, a^(1/p))."""
    return p * p - 2, (p - 1) ** 2
