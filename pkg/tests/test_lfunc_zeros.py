import io
import math
import warnings

import mpmath
import numpy as np
import pytest

from chebmoments.errors import DataFormatError, InputError
from chebmoments.lfunc_zeros import (COUNT_ENVELOPE, ZeroSet, b_sum, certify, dirichlet_L,
                                     dirichlet_character, dirichlet_zerosets, dump_zeros,
                                     find_dirichlet_zeros, hurwitz_zeta, ingest_zeros, tail_bound,
                                     variance_nu, w4, window_main_term, z_function,
                                     zero_count_window)
from chebmoments.weights import builtin_eta, eta_to_h

mpmath.mp.dps = 30
H = eta_to_h(builtin_eta("gaussian"))


@pytest.fixture(scope="module")
def zeta_zeros():
    return find_dirichlet_zeros(1, 0, 60.0)


@pytest.fixture(scope="module")
def mod5():
    return dirichlet_zerosets(5, 40.0)


@pytest.mark.parametrize("s, a", [(0.5 + 14j, 0.25), (0.5 + 3j, 1.0), (2.0, 0.5), (0.5 + 60j, 0.8)])
def test_hurwitz_against_mpmath(s, a):
    got = complex(hurwitz_zeta(np.array([s]), a)[0])
    want = complex(mpmath.zeta(s, a))
    assert abs(got - want) <= 1e-11 * max(1.0, abs(want))


@pytest.mark.parametrize("q, index", [(4, 1), (5, 1), (5, 2), (7, 3), (8, 2)])
def test_dirichlet_L_against_mpmath(q, index):
    chi = dirichlet_character(q, index)
    vals = [complex(v) for v in chi.values]
    for s in (0.5 + 5j, 0.5 + 23.7j, 1.5 - 2j):
        got = complex(dirichlet_L(np.array([s]), chi)[0])
        want = complex(mpmath.dirichlet(s, vals))
        assert abs(got - want) <= 1e-10 * max(1.0, abs(want))


def test_z_function_is_real():
    chi = dirichlet_character(5, 1).primitive()
    z = z_function(np.linspace(1, 40, 200), chi)
    assert np.isrealobj(z) or np.max(np.abs(np.imag(z))) < 1e-9


def test_zeta_first_zero_and_count(zeta_zeros):
    assert abs(zeta_zeros.ordinates[0] - 14.134725) < 1e-6
    assert int(np.sum(zeta_zeros.ordinates < 50)) == 10


def test_zeta_zeros_against_mpmath(zeta_zeros):
    want = [float(mpmath.zetazero(k).imag) for k in range(1, zeta_zeros.ordinates.size + 1)]
    assert np.max(np.abs(zeta_zeros.ordinates - want)) < 1e-8


def test_mod4_first_zero():
    zs = find_dirichlet_zeros(4, 1, 10.0)
    assert abs(zs.ordinates[0] - 6.0209) < 1e-4
    assert zs.self_dual and zs.gamma_shifts == (1,)


def test_complex_character_zeros_vanish(mod5):
    zs = mod5[1]
    assert not zs.self_dual
    chi = dirichlet_character(5, 1)
    vals = [complex(v) for v in chi.values]
    conj = [v.conjugate() for v in vals]
    for g in zs.ordinates[:5]:
        assert abs(complex(mpmath.dirichlet(0.5 + 1j * g, vals))) < 1e-7
    for g in zs.conj_ordinates[:5]:
        assert abs(complex(mpmath.dirichlet(0.5 + 1j * g, conj))) < 1e-7
    # the conjugate character has the two zero lists swapped
    j = next(k for k in range(4) if np.allclose(dirichlet_character(5, k).values, chi.values.conj()))
    assert j != 1
    assert np.allclose(mod5[j].ordinates, zs.conj_ordinates)
    assert np.allclose(mod5[j].conj_ordinates, zs.ordinates)


def test_certification_within_envelope(zeta_zeros, mod5):
    assert certify(zeta_zeros, dirichlet_character(1, 0)) <= COUNT_ENVELOPE
    for i, zs in mod5.items():
        assert certify(zs, dirichlet_character(5, i).primitive()) <= COUNT_ENVELOPE


def test_imprimitive_reduces():
    k = next(i for i in range(4) if dirichlet_character(8, i).conductor() == 4)
    a = find_dirichlet_zeros(8, k, 20.0)
    b = find_dirichlet_zeros(4, 1, 20.0)
    assert np.allclose(a.ordinates, b.ordinates)
    assert dirichlet_character(12, 0).primitive().modulus == 1


def test_limits():
    with pytest.raises(InputError):
        find_dirichlet_zeros(101, 1, 10.0)
    with pytest.raises(InputError):
        find_dirichlet_zeros(5, 1, 150.0)
    with pytest.raises(InputError):
        dirichlet_character(5, 4)


# -- windows -------------------------------------------------------------------------

def test_windows(zeta_zeros):
    assert zero_count_window(zeta_zeros, 14.0, 0.5, 0.0)[0] == 2
    assert zero_count_window(zeta_zeros, 2.0, 1.0, 0.0)[0] == 0
    with pytest.raises(InputError):
        zero_count_window(zeta_zeros, 59.5, 1.0, 0.0)
    with pytest.raises(InputError):
        zero_count_window(zeta_zeros, 10.0, 1.5, 0.0)


def test_window_main_term():
    assert window_main_term(30.0, 1.0, 0.0, 1) == pytest.approx(math.log(31 / (2 * math.pi * math.e)) / math.pi)


# -- sums ------------------------------------------------------------------------------

def single_pair(g0=10.0, central=0):
    return ZeroSet("pair", np.array([g0]), np.array([1]), central_order=central, height_max=30.0,
                   log_conductor=0.0)


def test_b_sum_empty_and_pair():
    empty = ZeroSet("e", np.zeros(0), np.zeros(0), height_max=30.0, log_conductor=0.0)
    assert b_sum(empty, H)[0] == 0.0
    v, _ = b_sum(single_pair(), H)
    assert v == pytest.approx(2 * float(H.h(np.array([10 / (2 * math.pi)]))[0]), rel=1e-15)


def test_b_central_and_positivity():
    zs = single_pair(central=2)
    b, _ = b_sum(zs, H, include_central=True)
    b0, _ = b_sum(zs, H, include_central=False)
    assert b == pytest.approx(b0 + 2 * H.h0)
    assert b >= b0 >= 0
    assert b_sum(single_pair(), H)[0] == b_sum(single_pair(), H, include_central=False)[0]


def test_b_linear_and_monotone(zeta_zeros):
    h1 = eta_to_h(builtin_eta("gaussian"))
    h2 = eta_to_h(builtin_eta("selfconv_bump"))
    g, m = zeta_zeros.signed()
    s1 = b_sum(zeta_zeros, h1)[0]
    s2 = b_sum(zeta_zeros, h2)[0]
    combo = float(np.sum(m * (2 * h1.h(g / (2 * math.pi)) + 3 * h2.h(g / (2 * math.pi)))))
    assert combo == pytest.approx(2 * s1 + 3 * s2, rel=1e-10)
    smaller = float(np.sum(m * 0.5 * h1.h(g / (2 * math.pi))))
    assert smaller <= s1


def test_b_zeta_positive_finite(zeta_zeros):
    v, bar = b_sum(zeta_zeros, H)
    assert 0 < v < math.inf and 0 <= bar < 1e-100


def test_tail_bound_covers_zeros(zeta_zeros):
    """The bound from height 20 must exceed the actual sum over 20 < |gamma| <= 60."""
    h = eta_to_h(builtin_eta("selfconv_bump"))
    g, m = zeta_zeros.signed()
    actual = float(np.sum((m * h.h(g / (2 * math.pi)))[np.abs(g) > 20]))
    assert tail_bound(20.0, h, 0.0, 1) >= actual


def test_variance_single(mod5):
    b0, _ = b_sum(mod5[3], H, include_central=False)
    coeffs = np.array([0, 0, 0, 1.0])
    nu, _ = variance_nu(coeffs, mod5, H)
    assert nu == pytest.approx(b0, rel=1e-15)
    assert w4(coeffs, mod5, H) == pytest.approx(1 / b0, rel=1e-12)
    assert variance_nu(np.zeros(4), mod5, H)[0] == 0.0


def test_variance_homogeneity_and_conjugation(mod5):
    c = np.array([0.25, 1.25 + 0.5j, 1.25 - 0.5j, 1.25])
    nu, _ = variance_nu(c, mod5, H)
    assert variance_nu(3 * c, mod5, H)[0] == pytest.approx(9 * nu, rel=1e-13)
    assert variance_nu(c.conj(), mod5, H)[0] == pytest.approx(nu, rel=1e-13)
    w = w4(c, mod5, H)
    # degree 4 over degree 4: scale invariant
    assert w4(3 * c, mod5, H) == pytest.approx(w, rel=1e-12)
    assert w4(c.conj(), mod5, H) == pytest.approx(w, rel=1e-12)


def test_variance_needs_support(mod5):
    with pytest.raises(InputError):
        variance_nu(np.array([0, 1.0, 0, 0, 1.0]), mod5, H)


# -- files -----------------------------------------------------------------------------

def test_round_trip(mod5):
    for zs in mod5.values():
        buf = io.StringIO()
        dump_zeros(zs, buf)
        back = ingest_zeros(io.StringIO(buf.getvalue()))
        assert np.array_equal(back.ordinates, zs.ordinates)
        assert np.array_equal(back.conj_ordinates, zs.conj_ordinates)
        assert (back.self_dual, back.height_max, back.log_conductor, back.gamma_shifts) == \
            (zs.self_dual, zs.height_max, zs.log_conductor, zs.gamma_shifts)
        assert back.issues == ()


def test_ingested_zeta_matches_finder(zeta_zeros):
    lines = ["zeros zeta selfdual=1 height=50 logA=0 shifts=0"]
    lines += [mpmath.nstr(mpmath.zetazero(k).imag, 15) for k in range(1, 11)]
    zs = ingest_zeros(io.StringIO("\n".join(lines)))
    assert np.max(np.abs(zs.ordinates - zeta_zeros.ordinates[:10])) < 1e-6


def test_empty_file_is_valid():
    zs = ingest_zeros(io.StringIO("zeros none central=0 height=0\n"))
    assert zs.ordinates.size == 0 and zs.central_order == 0


@pytest.mark.parametrize("text", ["", "14.1 1\n", "zeros x\nabc\n", "zeros x\n14.1 0\n",
                                  "zeros x height=y\n"])
def test_bad_files(text):
    with pytest.raises(DataFormatError):
        ingest_zeros(io.StringIO(text))


def test_suspicious_files_warn():
    text = "zeros x selfdual=1 height=10\n5 1\n5 1\n12 1\n-3 1\n"
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        zs = ingest_zeros(io.StringIO(text))
    assert len(zs.issues) == 3 and len(caught) == 3
