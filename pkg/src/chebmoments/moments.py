"""Central moments of psi_eta, their zero-sum counterparts, and the lower-bound reports.

The empirical moment integrates a power of the normalised remainder of
psi_eta(e^u) against Phi(u/U). The zero-sum moment replaces that remainder
by the sum over zeros produced by the explicit formula.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .chebotarev import FrobeniusOracle, PsiGrid, _class_values, psi_eta
from .errors import CostGuardError, InputError, NumericError
from .groups.classfun import ClassFunction
from .lfunc_zeros import ZeroSet, tail_bound
from .sieve import DEFAULT_CEILING
from .summation import comp_sum
from .weights import WeightEta, WeightPhi, eta_hat_as_h

MAX_ORDER = 8
MAX_D_ORDER = 4
MAX_D_CUTOFF = 60.0
MAX_D_TERMS = 5 * 10**7  # ordinate tuples per character multiset
PRUNE_REL = 1e-20  # ordinates with |eta_hat| below this fraction of the largest go to the bar


def gaussian_moment(r: int) -> int:
    """(r-1)!! for even r, 0 for odd r."""
    if r < 0:
        raise InputError("moment order must be nonnegative")
    if r % 2:
        return 0
    out = 1
    for k in range(r - 1, 0, -2):
        out *= k
    return out


# -- empirical moments -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MomentRequest:
    U: float
    n: int
    eta: WeightEta
    phi: WeightPhi
    oracle: FrobeniusOracle
    t: ClassFunction
    z: float = 0.0
    tol: float = 1e-6
    ceiling: int = DEFAULT_CEILING

    def __post_init__(self):
        if not self.U > 0:
            raise InputError("U must be positive")
        if not 1 <= self.n <= MAX_ORDER:
            raise InputError(f"moment order must lie in 1..{MAX_ORDER}")
        if not self.tol > 0:
            raise InputError("quadrature tolerance must be positive")


@dataclass(frozen=True)
class MomentResult:
    value: float
    bar: float
    quad_error: float
    psi_error: float
    n_evals: int


class EmpiricalMoments:
    """M~_n(U) for one (oracle, t, eta, Phi, U, z); residuals are cached across orders."""

    def __init__(self, oracle: FrobeniusOracle, t: ClassFunction, eta: WeightEta, phi: WeightPhi,
                 U: float, z: float = 0.0, tol: float = 1e-6, ceiling: int = DEFAULT_CEILING,
                 phi_tol: float = 1e-12):
        self.oracle, self.t, self.eta, self.phi = oracle, t, eta, phi
        self.U, self.z, self.tol = float(U), float(z), tol
        self.u_max = self.U * phi.cutoff(phi_tol)
        vals = _class_values(t, oracle)
        if np.iscomplexobj(vals):
            raise InputError("moments need a real-valued class function")
        self.t_hat1 = float(t.fourier[0].real)
        self.shift = eta.eta_hat0 * self.z
        self.norm = 1.0 / (self.U * phi.half_integral)
        if eta.name == "gaussian":
            self._grid = PsiGrid(oracle, t, eta, self.u_max, ceiling=ceiling)
            self._psi = lambda u: self._grid(u)  # noqa: E731
            self._bar = self._grid.bar
        else:
            def one(u):
                return np.array([float(psi_eta(math.exp(x), oracle, t, eta, ceiling=ceiling).value)
                                 for x in np.atleast_1d(u)])
            self._psi = one
            self._bar = lambda u: psi_eta(math.exp(u), oracle, t, eta, ceiling=ceiling).bar  # noqa: E731
        self._cache: dict[float, float] = {}
        self._results: dict[int, MomentResult] = {}

    def residual(self, u) -> np.ndarray:
        """psi_eta(e^u) - t^(1) e^(u/2) L_eta(1/2) - eta^(0) z, memoised per node."""
        u = np.atleast_1d(np.asarray(u, dtype=float))
        todo = np.array([x for x in np.unique(u) if float(x) not in self._cache])
        if todo.size:
            vals = self._psi(todo) - self.t_hat1 * np.exp(0.5 * todo) * self.eta.laplace_half - self.shift
            self._cache.update(zip(todo.tolist(), np.asarray(vals, dtype=float).tolist()))
        return np.array([self._cache[float(x)] for x in u])

    def _integrand(self, n: int) -> Callable[[np.ndarray], np.ndarray]:
        return lambda u: self.phi.phi(u / self.U) * self.residual(u) ** n  # noqa: E731

    def moment(self, n: int) -> MomentResult:
        if not 1 <= n <= MAX_ORDER:
            raise InputError(f"moment order must lie in 1..{MAX_ORDER}")
        if n in self._results:
            return self._results[n]
        f = self._integrand(n)
        probe = np.linspace(0.0, self.u_max, 257)
        scale = float(np.max(np.abs(f(probe)))) or 1.0
        value, qerr = adaptive_simpson(f, 0.0, self.u_max, self.tol * scale)
        perr = self._psi_error(n)
        res = MomentResult(self.norm * value, self.norm * (qerr + perr), self.norm * qerr,
                           self.norm * perr, len(self._cache))
        self._results[n] = res
        return res

    def _psi_error(self, n: int, nodes: int = 513) -> float:
        """int Phi(u/U) n (|r| + b)^(n-1) b du with b the psi_eta bar, by the trapezoid rule."""
        u = np.linspace(0.0, self.u_max, nodes)
        r = np.abs(self.residual(u))
        b = np.array([self._bar(float(x)) for x in u])
        g = self.phi.phi(u / self.U) * n * (r + b) ** (n - 1) * b
        return float(np.trapezoid(g, u))


def adaptive_simpson(f: Callable[[np.ndarray], np.ndarray], a: float, b: float, tol: float,
                     panels: int = 64, max_depth: int = 40) -> tuple[float, float]:
    """(integral, error estimate). Intervals are refined breadth first so f sees batches."""
    edges = np.linspace(a, b, panels + 1)
    lo, hi = edges[:-1], edges[1:]
    mid = 0.5 * (lo + hi)
    fl, fm, fh = f(lo), f(mid), f(hi)
    tols = np.full(panels, tol / panels)
    total, err = [], []
    for _ in range(max_depth):
        w = hi - lo
        whole = w / 6 * (fl + 4 * fm + fh)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = f(lm), f(rm)
        left = w / 12 * (fl + 4 * flm + fm)
        right = w / 12 * (fm + 4 * frm + fh)
        diff = left + right - whole
        done = np.abs(diff) <= 15 * tols
        total.append(left[done] + right[done] + diff[done] / 15)
        err.append(np.abs(diff[done]) / 15)
        keep = ~done
        if not keep.any():
            return float(comp_sum(np.concatenate(total))), float(np.sum(np.concatenate(err)))
        lo, mid, hi = np.concatenate([lo[keep], mid[keep]]), np.concatenate([lm[keep], rm[keep]]), \
            np.concatenate([mid[keep], hi[keep]])
        fl, fm, fh = np.concatenate([fl[keep], fm[keep]]), np.concatenate([flm[keep], frm[keep]]), \
            np.concatenate([fm[keep], fh[keep]])
        tols = np.concatenate([tols[keep], tols[keep]]) / 2
    raise NumericError("adaptive Simpson did not converge")


def mtilde(req: MomentRequest) -> MomentResult:
    if req.t.is_zero() and req.z == 0:
        return MomentResult(0.0, 0.0, 0.0, 0.0, 0)
    em = EmpiricalMoments(req.oracle, req.t, req.eta, req.phi, req.U, req.z, req.tol, req.ceiling)
    return em.moment(req.n)


def m_from_mtilde(mt: Sequence[float], z: float, eta_hat0: float) -> float:
    """M_2m = sum_j C(2m, j) M~_j (eta^(0) z)^(2m-j), from M~_0 .. M~_2m (M~_0 = 1)."""
    if len(mt) % 2 != 1:
        raise InputError("need M~_0 .. M~_2m, an odd number of values")
    n = len(mt) - 1
    c = eta_hat0 * z
    return float(sum(math.comb(n, j) * mt[j] * c ** (n - j) for j in range(n + 1)))


# -- zero-sum moments ---------------------------------------------------------------

@dataclass(frozen=True)
class DtildeResult:
    value: float
    bar: float
    imag_residue: float
    n_terms: int


def _kept_ordinates(zs: ZeroSet, eta: WeightEta, cutoff: float) -> tuple[np.ndarray, np.ndarray, float, float]:
    """(kept ordinates, their weights m eta^(g/2pi), kept |mass|, full |mass| bound)."""
    g, m = zs.signed()
    a = m * eta.eta_hat(g / (2 * math.pi))
    full = float(np.sum(np.abs(a)))
    if zs.height_max > 0:
        log_A = zs.log_conductor if zs.log_conductor is not None else 0.0
        full += tail_bound(zs.height_max, eta_hat_as_h(eta), log_A, zs.degree)
    else:
        full = math.inf
    sel = np.abs(g) <= cutoff
    if sel.any():
        top = float(np.max(np.abs(a[sel])))
        sel &= np.abs(a) >= PRUNE_REL * top
    return g[sel], a[sel], float(np.sum(np.abs(a[sel]))), full


def dtilde_truncated(zerosets: Mapping[int, ZeroSet], coeffs, eta: WeightEta, phi: WeightPhi,
                     U: float, n: int, cutoff: float = MAX_D_CUTOFF) -> DtildeResult:
    """Zero-sum moment D~_n(U), ordinates of both signs with |gamma| <= cutoff.

    ``coeffs[i]`` is the Fourier coefficient of character i; ``zerosets[i]``
    its zeros. The bar uses |Phi^| <= int Phi and the full |eta^| mass of each
    character (data plus certified tail), so it covers everything dropped.
    """
    if not 1 <= n <= MAX_D_ORDER:
        raise CostGuardError(f"D~_n limited to n <= {MAX_D_ORDER}")
    if not 0 < cutoff <= MAX_D_CUTOFF:
        raise CostGuardError(f"height cutoff must lie in (0, {MAX_D_CUTOFF}]")
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    support = [i for i in range(coeffs.size) if coeffs[i] != 0]
    if not support:
        return DtildeResult(0.0, 0.0, 0.0, 0)
    data = {}
    for i in support:
        if i not in zerosets:
            raise InputError(f"no zero set for character {i} in the support")
        data[i] = _kept_ordinates(zerosets[i], eta, cutoff)
    pref = (-1) ** n / (2 * phi.half_integral)
    kept_mass = sum(abs(coeffs[i]) * data[i][2] for i in support)
    full_mass = sum(abs(coeffs[i]) * data[i][3] for i in support)
    bar = abs(pref) * phi.integral * (full_mass ** n - kept_mass ** n)

    total = 0j
    n_terms = 0
    # the inner sum depends only on the multiset of characters
    for combo in itertools.combinations_with_replacement(support, n):
        count = math.factorial(n)
        for c in set(combo):
            count //= math.factorial(combo.count(c))
        size = math.prod(data[c][0].size for c in combo)
        if size == 0:
            continue
        if size > MAX_D_TERMS:
            raise CostGuardError(f"{size} ordinate tuples exceed the cost guard {MAX_D_TERMS}")
        gsum = np.zeros(())
        w = np.ones((), dtype=np.complex128)
        for c in combo:
            g, a = data[c][0], data[c][1]
            gsum = np.add.outer(gsum, g)
            w = np.multiply.outer(w, a)
        inner = comp_sum((phi.phi_hat(U * gsum.ravel() / (2 * math.pi)) * w.ravel()))
        total += count * math.prod(coeffs[c] for c in combo) * inner
        n_terms += size
    value = pref * total
    return DtildeResult(float(value.real), float(bar), abs(value.imag), n_terms)


# -- lower-bound reports -------------------------------------------------------------

@dataclass(frozen=True)
class GaussianLowerBound:
    main: float
    correction: float
    plumbing: float
    plumbing_has_kappa: bool
    nu_lower: float
    nu_upper: float
    slack_scale: float


def _log2(x: float) -> float:
    return math.log(math.log(x))


def gaussian_lower_bound(m: int, nu: float, w4: float, lambda11: float, log_rd_L: float,
                       deg_F: int, U: float, lambda12: float, alpha: float, S: float,
                       kappa_eta: float | None = None) -> GaussianLowerBound:
    """Gaussian lower bound mu_2m nu^m with its two error magnitudes and the nu bracket.

    The implied constants are unknown. The correction is reported with constant
    one; the plumbing term uses kappa_eta when given and otherwise is the
    coefficient of kappa_eta^(2m).
    """
    if not nu > 0:
        raise InputError("the variance must be positive")
    if m < 1:
        raise InputError("m must be a positive integer")
    main = gaussian_moment(2 * m) * nu ** m
    correction = main * m * m * math.factorial(m) * w4
    k = 1.0 if kappa_eta is None else kappa_eta
    plumbing = (k * deg_F * lambda11 * log_rd_L) ** (2 * m) / U
    centre = alpha * deg_F * log_rd_L * lambda12
    slack = 1.0 / _log2(math.exp(log_rd_L) + 2)
    return GaussianLowerBound(main, correction, plumbing, kappa_eta is not None,
                        (1 - S) * centre, (1 + S) * centre, slack)


@dataclass(frozen=True)
class OmegaReport:
    lower: float
    vacuous: bool
    beta: float
    beta_has_kappa: bool


def omega_report(log_rd_L: float, deg_F: int, lambda11: float, lambda12: float, S: float,
                 slack: float = 0.0, kappa_prime: float | None = None) -> OmegaReport:
    """x^(1/2)-normalised oscillation size and the window exponent beta."""
    if lambda12 <= 0:
        raise InputError("lambda_12 must be positive")
    gap = 1.0 - S - slack
    lower = math.sqrt(deg_F * log_rd_L * lambda12) * math.sqrt(max(gap, 0.0))
    rd = math.exp(log_rd_L)
    k = 1.0 if kappa_prime is None else kappa_prime
    beta = k * deg_F * lambda11 ** 2 * math.log(rd + 2) * _log2(rd + 2) / lambda12
    return OmegaReport(lower, gap <= 0, beta, kappa_prime is not None)


def dihedral_target(m: int, alpha: float, n: int, log_dL: float) -> float:
    return gaussian_moment(2 * m) * (alpha * (2 - 1 / n) * log_dL) ** m


def kummer_targets(m: int, alpha: float, p: int) -> tuple[float, float]:
    """Targets for t = |G| 1_e and for t = theta."""
    mu = gaussian_moment(2 * m)
    lp = math.log(p)
    return mu * (alpha * p ** 3 * lp) ** m, mu * (alpha * p * lp) ** m


# -- combinatorial lower bound --------------------------------------------------------

@dataclass(frozen=True)
class GammaMultiset:
    """Distinct positive reals with multiplicities and coefficients a_gamma (a_-gamma = conj)."""

    gammas: tuple[float, ...]
    mults: tuple[int, ...]
    coeffs: tuple[complex, ...]

    def __post_init__(self):
        if not len(self.gammas) == len(self.mults) == len(self.coeffs):
            raise InputError("gammas, multiplicities and coefficients must have equal length")
        if any(g <= 0 for g in self.gammas) or len(set(self.gammas)) != len(self.gammas):
            raise InputError("gammas must be distinct positive reals")
        if any(m < 1 for m in self.mults):
            raise InputError("multiplicities must be positive")

    @property
    def sup(self) -> float:
        return max((abs(a) for a in self.coeffs), default=0.0)

    @property
    def sum_sq(self) -> float:
        """sum over Gamma (with multiplicity) of |a|^2."""
        return float(sum(m * abs(a) ** 2 for m, a in zip(self.mults, self.coeffs)))

    @property
    def size(self) -> int:
        return int(sum(self.mults))

    @classmethod
    def from_values(cls, values, coeff: Callable[[float], complex]) -> "GammaMultiset":
        """Group repeated positive values into multiplicities."""
        counts: dict[float, int] = defaultdict(int)
        for v in values:
            counts[float(v)] += 1
        gs = tuple(sorted(counts))
        return cls(gs, tuple(counts[g] for g in gs), tuple(complex(coeff(g)) for g in gs))


S2L_MAX_DISTINCT = 6
S2L_MAX_ELL = 3


def s2l_bruteforce(g: GammaMultiset, ell: int) -> complex:
    """S_2l(a) by enumerating value tuples on both sides and matching their count vectors.

    A gamma tuple of distinct values v_1..v_l stands for prod m_v index tuples.
    Each side is accumulated separately, so the imaginary part of the result
    is whatever the enumeration produces.
    """
    if ell < 1:
        raise InputError("l must be a positive integer")
    k = len(g.gammas)
    if k > S2L_MAX_DISTINCT or ell > S2L_MAX_ELL:
        raise CostGuardError(f"enumeration limited to |Gamma| <= {S2L_MAX_DISTINCT}, l <= {S2L_MAX_ELL}")
    pos: dict[tuple[int, ...], complex] = defaultdict(complex)
    neg: dict[tuple[int, ...], complex] = defaultdict(complex)
    for tup in itertools.product(range(k), repeat=ell):
        key = tuple(tup.count(i) for i in range(k))
        wp, wn = 1 + 0j, 1 + 0j
        for i in tup:
            wp *= g.mults[i] * g.coeffs[i]
            wn *= g.mults[i] * np.conj(g.coeffs[i])  # a at -gamma
        pos[key] += wp
        neg[key] += wn
    return complex(sum(pos[key] * neg[key] for key in pos))


def s2l_naive(g: GammaMultiset, ell: int) -> complex:
    """S_2l(a) over index tuples of the expanded multiset (tiny instances only)."""
    idx = [i for i, m in enumerate(g.mults) for _ in range(m)]
    if len(idx) ** (2 * ell) > 2 * 10**6:
        raise CostGuardError("naive enumeration too large")
    out = 0j
    for left in itertools.product(idx, repeat=ell):
        lc = sorted(left)
        for right in itertools.product(idx, repeat=ell):
            if sorted(right) != lc:
                continue
            w = 1 + 0j
            for i, j in zip(left, right):
                w *= g.coeffs[i] * np.conj(g.coeffs[j])
            out += w
    return out


def s2l_lower_bound(g: GammaMultiset, ell: int) -> float:
    """l! X^(l-1) max(X - l! l (l-1) M^2 e^(1/l), 0) with X = sum |a|^2."""
    if ell < 1:
        raise InputError("l must be a positive integer")
    X = g.sum_sq
    f = math.factorial(ell)
    return f * X ** (ell - 1) * max(X - f * ell * (ell - 1) * g.sup ** 2 * math.exp(1 / ell), 0.0)


@dataclass(frozen=True)
class PairingCheck:
    lhs: float
    rhs: float
    main: float
    b0: float
    constant: float


def pairing_sum_check(zs: ZeroSet, eta: WeightEta, ell: int, indicator: int,
                      constant: float | None = None) -> PairingCheck:
    """Pairing sum of eta^(gamma/2pi) over matched zero tuples against its lower bound.

    indicator 0 (unitary): zeros of L(s, psi) L(s, conj psi); otherwise zeros of
    L(s, psi) alone. The correction constant defaults to the one that follows
    from the combinatorial bound: M^2 e^(1/l), doubled in the self-dual case.
    """
    if indicator not in (-1, 0, 1):
        raise InputError("Frobenius-Schur indicator must be -1, 0 or 1")
    if indicator == 0:
        values = list(np.repeat(zs.ordinates, zs.mults)) + list(np.repeat(zs.conj_ordinates, zs.conj_mults))
    else:
        if not zs.self_dual:
            raise InputError("a self-dual character needs a self-dual zero set")
        values = list(np.repeat(zs.ordinates, zs.mults))
    values = [v for v in values if v > 0]
    coeff = lambda v: complex(eta.eta_hat(np.array([v / (2 * math.pi)]))[0])  # noqa: E731
    g, m = zs.signed()
    b0 = float(np.sum(m * np.abs(eta.eta_hat(g / (2 * math.pi))) ** 2))
    if not values:
        return PairingCheck(0.0, 0.0, 0.0, 0.0, 0.0)
    gm = GammaMultiset.from_values(values, coeff)
    s = s2l_bruteforce(gm, ell)
    if abs(s.imag) > 1e-12 * max(1.0, abs(s.real)):
        raise NumericError("pairing sum is not real")
    f = math.factorial(ell)
    if constant is None:
        constant = gm.sup ** 2 * math.exp(1 / ell) * (1 if indicator == 0 else 2)
    scale = 1.0 if indicator == 0 else 2.0 ** -ell
    main = scale * f * b0 ** ell
    corr = scale * constant * f * f * ell * (ell - 1) * b0 ** (ell - 1)
    return PairingCheck(float(s.real), max(main - corr, 0.0), main, b0, constant)


@dataclass(frozen=True)
class S2lTrial:
    brute: complex
    bound: float
    instance: GammaMultiset
    ell: int
    extra: dict = field(default_factory=dict)


def random_gamma_multiset(rng: np.random.Generator, max_distinct: int = 5, max_mult: int = 3,
                          max_abs: float = 2.0) -> GammaMultiset:
    k = int(rng.integers(1, max_distinct + 1))
    gs = np.sort(rng.choice(np.arange(1, 1000), size=k, replace=False) / 10.0)
    mults = rng.integers(1, max_mult + 1, size=k)
    r = max_abs * np.sqrt(rng.uniform(0, 1, size=k))
    th = rng.uniform(0, 2 * math.pi, size=k)
    a = r * np.exp(1j * th)
    return GammaMultiset(tuple(float(x) for x in gs), tuple(int(x) for x in mults),
                         tuple(complex(x) for x in a))


def s2l_trials(trials: int, seed: int, max_ell: int = 3) -> list[S2lTrial]:
    """Seeded random instances with the enumerated sum and the lower bound."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(trials):
        g = random_gamma_multiset(rng)
        ell = int(rng.integers(1, max_ell + 1))
        out.append(S2lTrial(s2l_bruteforce(g, ell), s2l_lower_bound(g, ell), g, ell))
    return out
