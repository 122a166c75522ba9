import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chebmoments import groups as G
from chebmoments.chebotarev import cyclotomic_oracle
from chebmoments.errors import CostGuardError, InputError, NumericError
from chebmoments.lfunc_zeros import ZeroSet, find_dirichlet_zeros
from chebmoments.moments import (EmpiricalMoments, GammaMultiset, MomentRequest, adaptive_simpson,
                                 dihedral_target, dtilde_truncated, gaussian_moment,
                                 kummer_targets, m_from_mtilde, mtilde, omega_report,
                                 pairing_sum_check, random_gamma_multiset, s2l_bruteforce,
                                 s2l_lower_bound, s2l_naive, s2l_trials, gaussian_lower_bound)
from chebmoments.weights import builtin_eta, builtin_phi

ETA = builtin_eta("gaussian")
TRI = builtin_phi("triangle")


def test_gaussian_moments():
    assert [gaussian_moment(r) for r in range(9)] == [1, 0, 1, 0, 3, 0, 15, 0, 105]
    with pytest.raises(InputError):
        gaussian_moment(-1)


# -- adaptive Simpson ---------------------------------------------------------------------

@pytest.mark.parametrize("f, a, b, want", [
    (np.sin, 0.0, math.pi, 2.0),
    (lambda u: np.exp(-u * u), -6.0, 6.0, math.sqrt(math.pi)),
    (lambda u: np.abs(u - 0.3), 0.0, 1.0, 0.29),
    (lambda u: np.cos(40 * u), 0.0, 1.0, math.sin(40) / 40),
])
def test_simpson(f, a, b, want):
    v, err = adaptive_simpson(f, a, b, 1e-10)
    assert abs(v - want) < 1e-9 and err < 1e-9


def test_simpson_gives_up():
    with pytest.raises(NumericError):
        adaptive_simpson(lambda u: np.where(u > 0.5, 1.0, 0.0) * 1e9, 0.0, 1.0, 1e-15, max_depth=5)


# -- empirical moments --------------------------------------------------------------------

@pytest.fixture(scope="module")
def mod4_moments():
    o = cyclotomic_oracle(4)
    t = G.ClassFunction(o.table, 2 * G.delta_identity(o.table).values - 1)
    return EmpiricalMoments(o, t, ETA, TRI, 6.0)


def test_even_moments_nonnegative(mod4_moments):
    for n in (2, 4):
        r = mod4_moments.moment(n)
        assert r.value >= 0 and r.bar >= 0


def test_first_moment_small(mod4_moments):
    r = mod4_moments.moment(1)
    assert abs(r.value) < 5 and math.isfinite(r.bar)


def test_moment_against_dense_quadrature(mod4_moments):
    """Independent route: fixed trapezoid on a fine grid of direct psi_eta calls."""
    em = mod4_moments
    u = np.linspace(0, em.u_max, 3001)
    r = em.residual(u)
    dense = float(np.trapezoid(TRI.phi(u / em.U) * r ** 2, u)) * em.norm
    got = em.moment(2)
    assert abs(got.value - dense) <= 1e-3 * abs(dense) + got.bar


def test_zero_class_function():
    o = cyclotomic_oracle(4)
    zero = G.ClassFunction(o.table, np.zeros(2))
    assert mtilde(MomentRequest(6.0, 2, ETA, TRI, o, zero)).value == 0.0


def test_request_validation():
    o = cyclotomic_oracle(4)
    t = G.character(o.table, 1)
    for kw in ({"U": 0.0, "n": 2}, {"U": 5.0, "n": 0}, {"U": 5.0, "n": 9}, {"U": 5.0, "n": 2, "tol": 0}):
        with pytest.raises(InputError):
            MomentRequest(eta=ETA, phi=TRI, oracle=o, t=t, **kw)


def test_m_from_mtilde():
    mt = [1.0, 0.3, 2.0, -0.4, 7.0]
    assert m_from_mtilde(mt, 0.0, ETA.eta_hat0) == 7.0
    assert m_from_mtilde(mt[:3], 0.0, 2.5) == 2.0
    c = ETA.eta_hat0 * 0.5
    want = sum(math.comb(4, j) * mt[j] * c ** (4 - j) for j in range(5))
    assert m_from_mtilde(mt, 0.5, ETA.eta_hat0) == pytest.approx(want)
    with pytest.raises(InputError):
        m_from_mtilde(mt[:4], 0.0, 1.0)


# -- zero-sum moments -----------------------------------------------------------------------

def pair(g0, height=60.0):
    return ZeroSet("pair", np.array([g0]), np.array([1]), height_max=height, log_conductor=0.0)


def test_dtilde_single_pair_four_signs():
    g0, U = 7.3, 4.0
    d = dtilde_truncated({0: pair(g0)}, [1.0], ETA, TRI, U, 2)
    eh = float(ETA.eta_hat(np.array([g0 / (2 * math.pi)]))[0])
    hand = 1 / (2 * TRI.half_integral) * (2 * float(TRI.phi_hat(np.array([0.0]))[0])
                                          + 2 * float(TRI.phi_hat(np.array([U * g0 / math.pi]))[0])) * eh ** 2
    assert d.value == pytest.approx(hand, rel=1e-14)
    assert d.n_terms == 4


def test_dtilde_enumeration_oracle():
    """Direct loop over signed ordinate tuples for a three-character synthetic instance."""
    sets = {0: pair(5.0), 1: ZeroSet("c", np.array([3.0, 8.0]), np.array([1, 2]), self_dual=False,
                                     height_max=60.0, conj_ordinates=np.array([4.5]),
                                     conj_mults=np.array([1]), log_conductor=1.0),
            2: pair(11.0)}
    coeffs = np.array([0.5, 1.0 + 0.25j, -0.75])
    U = 3.0
    for n in (1, 2, 3):
        d = dtilde_truncated(sets, coeffs, ETA, TRI, U, n)
        flat = []
        for i, zs in sets.items():
            g, m = zs.signed()
            flat += [(i, gg, mm) for gg, mm in zip(g, m)]
        total = 0j
        for tup in itertools.product(flat, repeat=n):
            w = 1 + 0j
            for i, gg, mm in tup:
                w *= coeffs[i] * mm * float(ETA.eta_hat(np.array([gg / (2 * math.pi)]))[0])
            s = sum(gg for _, gg, _ in tup)
            total += w * float(TRI.phi_hat(np.array([U * s / (2 * math.pi)]))[0])
        want = (-1) ** n / (2 * TRI.half_integral) * total
        assert d.value == pytest.approx(want.real, rel=1e-12, abs=1e-15)
        assert d.imag_residue == pytest.approx(abs(want.imag), abs=1e-12)


def test_dtilde_empty_and_homogeneous():
    empty = ZeroSet("e", np.zeros(0), np.zeros(0), height_max=60.0, log_conductor=0.0)
    assert dtilde_truncated({0: empty}, [1.0], ETA, TRI, 5.0, 2).value == 0.0
    sets = {0: pair(5.0), 1: pair(9.0)}
    c = np.array([1.0, -0.5])
    for n in (1, 2, 3):
        base = dtilde_truncated(sets, c, ETA, TRI, 5.0, n).value
        assert dtilde_truncated(sets, 2 * c, ETA, TRI, 5.0, n).value == pytest.approx(2 ** n * base)


def test_dtilde_odd_sign():
    """Positive coefficients and a nonnegative Phi^ make D~_n carry the sign (-1)^n."""
    sets = {0: pair(5.0), 1: pair(9.0)}
    for n in (1, 2, 3):
        v = dtilde_truncated(sets, [1.0, 0.5], ETA, TRI, 2.0, n).value
        assert np.sign(v) == (-1) ** n


def test_dtilde_bar_covers_truncation():
    zs = find_dirichlet_zeros(4, 1, 60.0)
    full = dtilde_truncated({1: zs}, [0, 1.0], ETA, TRI, 6.0, 2, cutoff=60.0)
    cut = dtilde_truncated({1: zs}, [0, 1.0], ETA, TRI, 6.0, 2, cutoff=12.0)
    assert abs(full.value - cut.value) <= cut.bar


def test_dtilde_guards():
    with pytest.raises(CostGuardError):
        dtilde_truncated({0: pair(5.0)}, [1.0], ETA, TRI, 5.0, 5)
    with pytest.raises(CostGuardError):
        dtilde_truncated({0: pair(5.0)}, [1.0], ETA, TRI, 5.0, 2, cutoff=100.0)
    with pytest.raises(InputError):
        dtilde_truncated({}, [1.0], ETA, TRI, 5.0, 2)


# -- combinatorial lower bound -----------------------------------------------------------------

def test_s2l_ell_one():
    """Index tuples count m^2 pairs per ordinate; for simple ordinates this is the plain mass."""
    g = GammaMultiset((1.0, 2.5), (2, 3), (1 + 1j, 0.5))
    assert s2l_bruteforce(g, 1) == pytest.approx(2 ** 2 * 2 + 3 ** 2 * 0.25)
    assert s2l_naive(g, 1) == pytest.approx(2 ** 2 * 2 + 3 ** 2 * 0.25)
    assert s2l_bruteforce(g, 1).real >= g.sum_sq
    simple = GammaMultiset((1.0, 2.5), (1, 1), (1 + 1j, 0.5))
    assert s2l_bruteforce(simple, 1) == pytest.approx(simple.sum_sq)


def test_s2l_single_gamma():
    """One ordinate, a = 1: a single pair of length-2 tuples; with multiplicity m there are m^4."""
    assert s2l_bruteforce(GammaMultiset((3.0,), (1,), (1.0,)), 2) == 1
    assert s2l_naive(GammaMultiset((3.0,), (1,), (1.0,)), 2) == 1
    assert s2l_bruteforce(GammaMultiset((3.0,), (2,), (1.0,)), 2) == 16
    assert s2l_naive(GammaMultiset((3.0,), (2,), (1.0,)), 2) == 16


def test_s2l_zero_coefficients():
    assert s2l_bruteforce(GammaMultiset((1.0, 2.0), (1, 1), (0, 0)), 3) == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_s2l_bucket_matches_naive(seed, ell):
    g = random_gamma_multiset(np.random.default_rng(seed), max_distinct=3, max_mult=2)
    if sum(g.mults) ** (2 * ell) > 2 * 10**6:
        return
    a, b = s2l_bruteforce(g, ell), s2l_naive(g, ell)
    assert abs(a - b) <= 1e-10 * max(1.0, abs(b))


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_s2l_lower_bound_property(seed, ell):
    g = random_gamma_multiset(np.random.default_rng(seed))
    s = s2l_bruteforce(g, ell)
    assert abs(s.imag) < 1e-12
    assert s.real >= s2l_lower_bound(g, ell) * (1 - 1e-12) - 1e-12


def test_s2l_trials_deterministic():
    a = s2l_trials(50, 7)
    b = s2l_trials(50, 7)
    assert [t.brute for t in a] == [t.brute for t in b]


def test_s2l_guards():
    big = GammaMultiset(tuple(float(i) for i in range(1, 8)), (1,) * 7, (1.0,) * 7)
    with pytest.raises(CostGuardError):
        s2l_bruteforce(big, 2)
    with pytest.raises(InputError):
        s2l_lower_bound(big, 0)


def test_main_term_alone_can_fail():
    """Without the correction term the inequality is false: S_4 = 2 X^2 - sum |a|^4 < 2 X^2."""
    g = GammaMultiset((1.0, 2.0), (1, 1), (1.0, 1.0))
    assert s2l_bruteforce(g, 2).real == pytest.approx(2 * 2 ** 2 - 2)
    assert s2l_bruteforce(g, 2).real < 2 * g.sum_sq ** 2


# -- pairing sums ------------------------------------------------------------------------------------

def test_pairing_unitary_one_pair():
    zs = ZeroSet("u", np.array([6.0]), np.array([1]), self_dual=False, height_max=20.0,
                 conj_ordinates=np.array([6.0]), conj_mults=np.array([1]), log_conductor=0.0)
    r = pairing_sum_check(zs, ETA, 1, 0)
    eh = float(ETA.eta_hat(np.array([6.0 / (2 * math.pi)]))[0])
    assert r.lhs == pytest.approx(2 * eh ** 2)
    assert r.b0 == pytest.approx(2 * eh ** 2)
    assert r.lhs >= r.main


def test_pairing_empty():
    zs = ZeroSet("e", np.zeros(0), np.zeros(0), height_max=20.0, log_conductor=0.0)
    r = pairing_sum_check(zs, ETA, 2, 1)
    assert (r.lhs, r.rhs) == (0.0, 0.0)


def test_pairing_self_dual_three_ordinates():
    zs = ZeroSet("s", np.array([2.0, 3.5, 5.0]), np.array([1, 1, 1]), height_max=20.0, log_conductor=0.0)
    r = pairing_sum_check(zs, ETA, 2, 1)
    assert r.lhs >= r.rhs
    assert r.main == pytest.approx(2 ** -2 * 2 * r.b0 ** 2)


def test_pairing_on_real_zeros():
    zs = find_dirichlet_zeros(4, 1, 22.0)
    for ell in (1, 2, 3):
        r = pairing_sum_check(zs, ETA, ell, 1)
        assert r.lhs >= r.rhs - 1e-15


def test_pairing_validation():
    zs = ZeroSet("u", np.array([6.0]), np.array([1]), self_dual=False, height_max=20.0,
                 conj_ordinates=np.array([7.0]), conj_mults=np.array([1]), log_conductor=0.0)
    with pytest.raises(InputError):
        pairing_sum_check(zs, ETA, 1, 1)
    with pytest.raises(InputError):
        pairing_sum_check(zs, ETA, 1, 2)


# -- reports --------------------------------------------------------------------------------------

def test_gaussian_lower_bound_m1():
    tb = gaussian_lower_bound(1, 0.7, 0.1, 4.0, 1.2, 1, 10.0, 4.75, math.sqrt(math.pi), 0.3)
    assert tb.main == 0.7
    assert not tb.plumbing_has_kappa
    assert tb.nu_lower == pytest.approx(0.7 * math.sqrt(math.pi) * 1.2 * 4.75)
    assert tb.nu_upper == pytest.approx(1.3 * math.sqrt(math.pi) * 1.2 * 4.75)
    with_k = gaussian_lower_bound(1, 0.7, 0.1, 4.0, 1.2, 1, 10.0, 4.75, 1.0, 0.3, kappa_eta=2.0)
    assert with_k.plumbing_has_kappa and with_k.plumbing == pytest.approx(4 * tb.plumbing)
    with pytest.raises(InputError):
        gaussian_lower_bound(1, 0.0, 0.1, 4.0, 1.2, 1, 10.0, 4.75, 1.0, 0.3)


def test_targets():
    a = math.sqrt(math.pi)
    assert dihedral_target(2, a, 5, 3.0) == pytest.approx(3 * (a * 1.8 * 3.0) ** 2)
    t1, t2 = kummer_targets(1, a, 3)
    assert (t1, t2) == pytest.approx((a * 27 * math.log(3), a * 3 * math.log(3)))


def test_omega_report():
    r = omega_report(2.0, 1, 4.0, 5.0, 1.0)
    assert r.vacuous and r.lower == 0.0
    r = omega_report(2.0, 1, 4.0, 5.0, 0.0)
    assert not r.vacuous and r.lower == pytest.approx(math.sqrt(10.0))
    assert not r.beta_has_kappa
    # K = L with t = |G| 1_e: the bound grows like (log d_L)^(1/2)
    grows = [omega_report(ld / 6, 1, 6.0, 36.0 * 6, 0.2).lower for ld in (10.0, 40.0)]
    assert grows[1] / grows[0] == pytest.approx(2.0)
