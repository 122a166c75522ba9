"""Frobenius oracles, the weighted prime sum psi_eta and its explicit-formula partner.

At a ramified prime the value t(Frob^m) is the mean of t over the coset
Frob^m I (I the inertia group), which matches the Euler factors of Artin
L-functions. Oracles that know their inertia data supply it through
``ramified_dist``; for the others those primes are left out and their
largest possible contribution goes into the error bar.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, TextIO

import numpy as np
from scipy import integrate, special

from .errors import DataFormatError, InputError, NumericError
from .groups import finite
from .groups.classfun import ClassFunction
from .groups.finite import FiniteGroup
from .groups.induction import SubgroupEmbedding, induce
from .groups.tables import character_table
from .lfunc_zeros import ZeroSet, tail_bound
from .sieve import DEFAULT_CEILING, primes_upto
from .summation import comp_sum
from .weights import WeightEta, eta_hat_as_h

CHEBYSHEV_CONST = 1.03883  # psi(y) < 1.03883 y for all y > 0


class _Ramified:
    def __repr__(self):
        return "Ramified"


Ramified = _Ramified()

IdealFn = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray]]
RamDistFn = Callable[[int, int], np.ndarray]
RamIdealFn = Callable[[int], tuple[int, int]]


@dataclass(frozen=True, eq=False)
class FrobeniusOracle:
    """Unramified rational prime -> prime ideals above it with their Frobenius classes.

    ``ideals(ps)`` takes unramified primes and returns (position in ps, residue
    degree f, class id) for every prime ideal of the base field above them.
    ``ramified_dist(l, m)``, when present, gives the class distribution of the
    coset Frob_P^m I_P for a prime P of the base field above a ramified l.
    ``ramified_ideals(l)`` is (residue degree, number of such P); (1, 1) over Q.
    """

    descriptor: str
    group: FiniteGroup
    ramified: frozenset[int]
    base_degree: int
    ideals: IdealFn
    ramified_dist: RamDistFn | None = None
    ramified_ideals: RamIdealFn | None = None

    @property
    def table(self):
        return character_table(self.group)


def _powmod(base: np.ndarray, exp: np.ndarray, mod: np.ndarray) -> np.ndarray:
    """Elementwise base^exp mod mod for int64 arrays with mod < 2^31."""
    base = np.asarray(base, dtype=np.int64) % mod
    exp = np.asarray(exp, dtype=np.int64).copy()
    result = np.ones_like(base)
    while np.any(exp > 0):
        odd = (exp & 1).astype(bool)
        result = np.where(odd, (result * base) % mod, result)
        base = (base * base) % mod
        exp >>= 1
    return result


def _single(cls_fn) -> IdealFn:
    def ideals(ps):
        ps = np.asarray(ps, dtype=np.int64)
        return np.arange(ps.size), np.ones(ps.size, dtype=np.int64), cls_fn(ps)
    return ideals


def _prime_factors(n: int) -> frozenset[int]:
    out, d, n = set(), 2, abs(n)
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return frozenset(out)


def trivial_oracle() -> FrobeniusOracle:
    return FrobeniusOracle("trivial", finite.cyclic(1), frozenset(), 1,
                           _single(lambda ps: np.zeros(ps.size, dtype=np.int64)))


def cyclotomic_oracle(q: int) -> FrobeniusOracle:
    """Q(zeta_q)/Q; Frobenius of l is the residue l mod q."""
    if q < 3 or q % 4 == 2:
        raise InputError("cyclotomic(q) needs q >= 3 with q != 2 mod 4")
    g = finite.units(q)
    lookup = np.full(q, -1, dtype=np.int64)
    for i, a in enumerate(finite.residues(g)):
        lookup[a] = i
    res = np.array(finite.residues(g), dtype=np.int64)

    def dist(ell, m):
        # I_l = {a = 1 mod q'} where q = l^k q'; the coset is {a = l^m mod q'}
        qp = q
        while qp % ell == 0:
            qp //= ell
        hit = res % qp == pow(ell, m, qp) % qp
        return hit / hit.sum()

    return FrobeniusOracle(f"cyclotomic:{q}", g, _prime_factors(q), 1,
                           _single(lambda ps: lookup[ps % q]), dist)


def relative_cyclotomic_oracle(q: int, subgroup) -> FrobeniusOracle:
    """Q(zeta_q)/K with K the fixed field of the subgroup H of (Z/q)^x.

    Above an unramified l there are [G:H]/f primes of K of norm l^f, where f is
    the order of l modulo H; each has Frobenius l^f in H.
    """
    if q < 3 or q % 4 == 2:
        raise InputError("cyclotomic(q) needs q >= 3 with q != 2 mod 4")
    h = finite.units(q, subgroup)
    hres = finite.residues(h)
    full = finite.units(q).order
    index = full // h.order
    lookup = np.full(q, -1, dtype=np.int64)
    for i, a in enumerate(hres):
        lookup[a] = i

    def ideals(ps):
        ps = np.asarray(ps, dtype=np.int64)
        r = ps % q
        f = np.zeros(ps.size, dtype=np.int64)
        cur = r.copy()
        for k in range(1, index + 1):
            hit = (f == 0) & (lookup[cur] >= 0)
            f[hit] = k
            cur = (cur * r) % q
        if np.any(f == 0):
            raise NumericError("residue degree not found")
        frob = _powmod(r, f, np.full(ps.size, q, dtype=np.int64))
        counts = index // f
        pos = np.repeat(np.arange(ps.size), counts)
        return pos, f[pos], lookup[frob[pos]]

    hres_arr = np.array(hres, dtype=np.int64)
    gres = np.array(finite.residues(finite.units(q)), dtype=np.int64)

    def _split(ell):
        # I = {a = 1 mod q'}; f is the order of l in G / (H I)
        qp = q
        while qp % ell == 0:
            qp //= ell
        hi = {int(a) % qp for a in hres_arr}
        f, cur = 1, ell % qp
        while cur % qp not in hi:
            cur = (cur * ell) % qp
            f += 1
        return qp, f

    def ram_ideals(ell):
        qp, f = _split(ell)
        hi_size = len({int(a) % qp for a in hres_arr})
        g_size = len({int(a) % qp for a in gres})
        return f, g_size // (hi_size * f)

    def ram_dist(ell, m):
        # Frob_P^m I_P inside H: elements of H congruent to l^(f m) mod q'
        qp, f = _split(ell)
        hit = hres_arr % qp == pow(ell, f * m, qp) % qp
        return hit / hit.sum()

    desc = f"relcyclotomic:{q}," + "/".join(map(str, hres))
    return FrobeniusOracle(desc, h, _prime_factors(q), index, ideals, ram_dist, ram_ideals)


def quadratic_oracle(d: int) -> FrobeniusOracle:
    """Q(sqrt d)/Q; class 0 if l splits, 1 if inert."""
    from .conductors import quadratic_discriminant

    D = quadratic_discriminant(d)

    def cls(ps):
        out = np.empty(ps.size, dtype=np.int64)
        two = ps == 2
        if np.any(two):
            out[two] = 0 if D % 8 == 1 else 1
        odd = ~two
        po = ps[odd]
        e = _powmod(np.full(po.size, D, dtype=np.int64) % po, (po - 1) // 2, po)
        out[odd] = np.where(e == 1, 0, 1)
        return out

    return FrobeniusOracle(f"quadratic:{d}", finite.cyclic(2), _prime_factors(D), 1, _single(cls),
                           lambda ell, m: np.array([0.5, 0.5]))


def kummer_oracle(a: int, p: int) -> FrobeniusOracle:
    """Q(zeta_p, a^(1/p))/Q with group Aff(F_p): classes Id, U, T_c (index c)."""
    if not finite.is_prime(p) or p < 3:
        raise InputError("kummer(a, p) needs an odd prime p")
    if a in (0, 1, -1):
        raise InputError("kummer(a, p) needs a != 0, +-1")

    def cls(ps):
        r = ps % p
        out = r.copy()  # T_c at index c when l != 1 mod p
        one = r == 1
        if np.any(one):
            po = ps[one]
            e = _powmod(np.full(po.size, a, dtype=np.int64) % po, (po - 1) // p, po)
            out[one] = np.where(e == 1, 0, 1)
        return out

    g = finite.affine(p)
    uniform = np.array(g.class_sizes, dtype=float) / g.order

    def dist(ell, m):
        if ell == p:
            return uniform  # totally ramified
        # tame: inertia is the translation subgroup, Frobenius acts as ell mod p
        out = np.zeros(g.num_classes)
        c = pow(ell, m, p)
        if c == 1:
            out[0], out[1] = 1 / p, (p - 1) / p
        else:
            out[c] = 1.0
        return out

    fa = _prime_factors(a)
    tame = (all(abs(a) % (ell * ell) for ell in fa) and a % p != 0
            and pow(a % (p * p), p - 1, p * p) != 1)
    return FrobeniusOracle(f"kummer:{a},{p}", g, _prime_factors(a * p), 1, _single(cls),
                           dist if tame else None)


def file_oracle(src: TextIO) -> FrobeniusOracle:
    """``oracle <group ref> ramified p1 p2 ...`` followed by ``l classid`` lines."""
    head = None
    data: dict[int, int] = {}
    for n, raw in enumerate(src, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        w = line.split()
        if head is None:
            if w[0] != "oracle" or len(w) < 2:
                raise DataFormatError("oracle file must start with 'oracle <group ref>'")
            try:
                g = finite.from_ref(w[1])
            except InputError as exc:
                raise DataFormatError(str(exc)) from None
            ram = frozenset(int(x) for x in w[3:]) if len(w) > 2 and w[2] == "ramified" else frozenset()
            head = (g, ram)
            continue
        try:
            ell, c = int(w[0]), int(w[1])
        except (IndexError, ValueError) as exc:
            raise DataFormatError(f"line {n}: {exc}") from None
        if not 0 <= c < head[0].num_classes:
            raise DataFormatError(f"line {n}: class id {c} out of range")
        data[ell] = c
    if head is None:
        raise DataFormatError("empty oracle file")
    keys = np.array(sorted(data), dtype=np.int64)
    vals = np.array([data[k] for k in keys], dtype=np.int64)

    def cls(ps):
        pos = np.searchsorted(keys, ps)
        pos = np.minimum(pos, max(keys.size - 1, 0))
        if keys.size == 0 or np.any(keys[pos] != ps):
            missing = ps[(keys.size == 0) | (keys[pos] != ps)] if keys.size else ps
            raise InputError(f"oracle file has no Frobenius data for prime {int(missing[0])}")
        return vals[pos]

    return FrobeniusOracle(f"file:{head[0].ref}", head[0], head[1], 1, _single(cls))


def builtin_oracle(ext: str) -> FrobeniusOracle:
    """trivial, cyclotomic:q, relcyclotomic:q,h1/h2/..., quadratic:d, kummer:a,p."""
    kind, _, rest = ext.partition(":")
    try:
        if kind == "trivial":
            return trivial_oracle()
        if kind == "cyclotomic":
            return cyclotomic_oracle(int(rest))
        if kind == "relcyclotomic":
            q, hs = rest.split(",", 1)
            return relative_cyclotomic_oracle(int(q), [int(x) for x in hs.split("/")])
        if kind == "quadratic":
            return quadratic_oracle(int(rest))
        if kind == "kummer":
            a, p = rest.split(",")
            return kummer_oracle(int(a), int(p))
    except ValueError as exc:
        raise InputError(f"bad extension descriptor {ext!r}: {exc}") from None
    raise InputError(f"unknown extension kind {kind!r}")


def frobenius(oracle: FrobeniusOracle, ell: int):
    """Class id of the Frobenius at (a prime of the base field above) ell, or Ramified."""
    if not finite.is_prime(ell):
        raise InputError(f"{ell} is not prime")
    if ell in oracle.ramified:
        return Ramified
    _, _, cls = oracle.ideals(np.array([ell], dtype=np.int64))
    return int(cls[0])


# -- prime power terms ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PrimePowerTerms:
    """Prime ideal powers P^m of the base field, unramified, in a window of norms.

    For each term: log N(P) (``log_norm``), exponent m and the class of Frob_P^m.
    The weight of a term is log N(P) / N(P)^(m/2).
    """

    log_norm: np.ndarray
    m: np.ndarray
    cls: np.ndarray

    @property
    def log_value(self) -> np.ndarray:
        return self.m * self.log_norm

    @property
    def weight(self) -> np.ndarray:
        return self.log_norm * np.exp(-0.5 * self.m * self.log_norm)


def _power_classes(g: FiniteGroup, cls: np.ndarray, m: int) -> np.ndarray:
    table = np.array([g.power_class(c, m) for c in range(g.num_classes)], dtype=np.int64)
    return table[cls]


def prime_power_terms(oracle: FrobeniusOracle, lo: float, hi: float,
                      ceiling: int = DEFAULT_CEILING) -> PrimePowerTerms:
    """Terms with lo <= N(P)^m <= hi, sorted by N(P)^m (ties: by m, then class)."""
    if hi < 2:
        e = np.zeros(0)
        return PrimePowerTerms(e, e.astype(np.int64), e.astype(np.int64))
    ps = primes_upto(int(math.floor(hi)), ceiling)
    if oracle.ramified:
        ps = ps[~np.isin(ps, np.array(sorted(oracle.ramified), dtype=np.int64))]
    pos, f, cls = oracle.ideals(ps)
    logn = f * np.log(ps[pos].astype(np.float64))
    log_hi = math.log(hi)
    log_lo = math.log(lo) if lo > 0 else -math.inf
    keep = logn <= log_hi + 1e-15
    logn, cls = logn[keep], cls[keep]
    parts_l, parts_m, parts_c = [], [], []
    m = 1
    while logn.size:
        sel = m * logn <= log_hi + 1e-15
        logn, cls = logn[sel], cls[sel]
        if not logn.size:
            break
        inw = m * logn >= log_lo - 1e-15
        parts_l.append(logn[inw])
        parts_m.append(np.full(int(inw.sum()), m, dtype=np.int64))
        parts_c.append(_power_classes(oracle.group, cls[inw], m) if m > 1 else cls[inw])
        m += 1
    L = np.concatenate(parts_l) if parts_l else np.zeros(0)
    M = np.concatenate(parts_m) if parts_m else np.zeros(0, dtype=np.int64)
    C = np.concatenate(parts_c) if parts_c else np.zeros(0, dtype=np.int64)
    order = np.lexsort((C, M, M * L))
    return PrimePowerTerms(L[order], M[order], C[order])


# -- psi_eta ----------------------------------------------------------------------

@dataclass(frozen=True)
class PsiResult:
    value: complex | float
    bar: float
    truncation_bar: float
    ramified_bar: float
    n_terms: int


def _class_values(t: ClassFunction | np.ndarray, oracle: FrobeniusOracle) -> np.ndarray:
    if isinstance(t, ClassFunction):
        if t.group.num_classes != oracle.group.num_classes or t.group.class_sizes != oracle.group.class_sizes:
            raise InputError("class function is not on the Galois group of this oracle")
        vals = np.asarray(t.values)
    else:
        vals = np.asarray(t, dtype=np.complex128)
    if np.all(vals.imag == 0):
        return vals.real.astype(np.float64)
    return vals


def _tail_integral(eta: WeightEta, R: float) -> float:
    """int_R^inf e^(u/2) |eta(u)| du."""
    if eta.support is not None and R >= eta.support:
        return 0.0
    f = lambda u: math.exp(0.5 * u) * abs(float(eta.eta(np.array([u]))[0]))  # noqa: E731
    return integrate.quad(f, R, np.inf, limit=200)[0]


def truncation_bar(x: float, eta: WeightEta, R: float, tmax: float, deg: int) -> float:
    """Bound for the terms outside |log(n/x)| <= R (eta is even and decreasing beyond R)."""
    if eta.support is not None and R >= eta.support:
        return 0.0
    eta_R = abs(float(eta.eta(np.array([R]))[0]))
    low = eta_R * 2 * CHEBYSHEV_CONST * math.sqrt(x * math.exp(-R))
    high = CHEBYSHEV_CONST * (math.sqrt(x * math.exp(R)) * eta_R + math.sqrt(x) * _tail_integral(eta, R))
    return tmax * deg * (low + high)


def ramified_terms(oracle: FrobeniusOracle, vals: np.ndarray, lo: float,
                   hi: float) -> tuple[np.ndarray, np.ndarray]:
    """(log N(P)^m, count * log N(P) N(P)^(-m/2) * mean of t over Frob^m I) for P over ramified l."""
    if oracle.ramified_dist is None or hi < 2:
        return np.zeros(0), np.zeros(0)
    logs, ws = [], []
    for ell in sorted(oracle.ramified):
        f, count = oracle.ramified_ideals(ell) if oracle.ramified_ideals else (1, 1)
        ll = f * math.log(ell)
        m = max(1, math.ceil(math.log(max(lo, 1.0)) / ll - 1e-12))
        while m * ll <= math.log(hi) + 1e-15:
            avg = complex(np.dot(oracle.ramified_dist(ell, m), vals))
            logs.append(m * ll)
            ws.append(count * ll * math.exp(-0.5 * m * ll) * avg)
            m += 1
    w = np.array(ws, dtype=np.complex128)
    if np.all(w.imag == 0):
        w = w.real
    return np.array(logs), w


def ramified_bar(x: float, oracle: FrobeniusOracle, eta: WeightEta, tmax: float) -> float:
    """Largest possible contribution of the omitted ramified prime ideals."""
    if oracle.ramified_dist is not None:
        return 0.0
    total = 0.0
    lx = math.log(x)
    for ell in oracle.ramified:
        ll = math.log(ell)
        k = np.arange(1, 400)
        total += float(np.sum(ll * np.exp(-0.5 * k * ll) * np.abs(eta.eta(k * ll - lx))))
    return tmax * oracle.base_degree * total


def psi_eta(x: float, oracle: FrobeniusOracle, t, eta: WeightEta, tol: float = 1e-12,
            ceiling: int = DEFAULT_CEILING) -> PsiResult:
    """sum over P, m of t(Frob_P^m) log N(P) N(P)^(-m/2) eta(log(N(P)^m / x))."""
    if x < 1:
        raise InputError("psi_eta needs x >= 1")
    vals = _class_values(t, oracle)
    tmax = float(np.max(np.abs(vals))) if vals.size else 0.0
    R = eta.support_radius(tol)
    lo, hi = x * math.exp(-R), x * math.exp(R)
    if tmax == 0:
        return PsiResult(0.0, 0.0, 0.0, 0.0, 0)
    terms = prime_power_terms(oracle, lo, hi, ceiling)
    w = terms.weight * eta.eta(terms.log_value - math.log(x))
    rl, rw = ramified_terms(oracle, vals, lo, hi)
    value = comp_sum(np.concatenate([vals[terms.cls] * w, rw * eta.eta(rl - math.log(x))]))
    tb = truncation_bar(x, eta, R, tmax, oracle.base_degree)
    rb = ramified_bar(x, oracle, eta, tmax)
    return PsiResult(value, tb + rb, tb, rb, int(w.size))


def psi_unweighted(x: float, oracle: FrobeniusOracle, t, ceiling: int = DEFAULT_CEILING) -> float:
    """sum over N(P)^m <= x of t(Frob_P^m) log N(P)."""
    if x < 2:
        raise InputError("psi_unweighted needs x >= 2")
    vals = _class_values(t, oracle)
    terms = prime_power_terms(oracle, 1.0, x, ceiling)
    return comp_sum(vals[terms.cls] * terms.log_norm)


# -- explicit formula ---------------------------------------------------------------

@dataclass(frozen=True)
class ExplicitResult:
    value: complex | float
    bar: float
    zero_sum: complex
    main: float
    log_term: float
    arch_term: float
    dual_bound: float
    zero_tail: float
    quad_error: float


def _arch_integral(x: float, eta: WeightEta, shifts) -> tuple[float, float]:
    """(1/2pi) int cos(r log x) eta_hat(r/2pi) sum_j Re digamma((1/2 + mu_j + i r)/2) dr."""
    lx = math.log(x)
    R = 2 * math.pi * 12.0 if eta.name == "gaussian" else 2 * math.pi * 200.0

    def f(r):
        dg = sum(special.digamma((0.5 + mu + 1j * r) / 2).real for mu in shifts)
        return math.cos(r * lx) * float(eta.eta_hat(np.array([r / (2 * math.pi)]))[0]) * dg

    # even integrand: twice the half line
    val, err = integrate.quad(f, 0.0, R, limit=2000, epsabs=1e-13, epsrel=1e-12)
    # beyond R the transform is below its majorant; digamma grows like log r
    h = eta_hat_as_h(eta)
    tail = float(h.majorant(np.array([R / (2 * math.pi)]))[0]) * len(shifts) * math.log(R + 2) * 2
    return 2 * val / (2 * math.pi), (2 * err + tail) / (2 * math.pi)


def _dual_bound(x: float, eta: WeightEta, deg: int) -> float:
    """Bound for |psi_eta(1/x; conj chi)| using Lambda(n) <= log n."""
    lx = math.log(x)
    total = 0.0
    n0 = 2
    while True:
        n = np.arange(n0, n0 + 100000, dtype=np.float64)
        part = np.log(n) / np.sqrt(n) * np.abs(eta.eta(np.log(n) + lx))
        total += float(np.sum(part))
        if part[-1] < 1e-30 or n0 > 10**7:
            break
        n0 += 100000
    return deg * total


def explicit_formula_rhs(x: float, zs: ZeroSet, eta: WeightEta, log_A: float | None = None,
                         trivial: bool = False, gamma_shifts=None) -> ExplicitResult:
    """Zero side of the explicit formula for psi_eta(x; chi).

    delta x^(1/2) L_eta(1/2) + delta x^(-1/2) L_eta(-1/2) - sum_gamma x^(i gamma) eta_hat(gamma/2pi)
    + eta(log x) (log A - d log pi) + archimedean integral.

    psi_eta(1/x; conj chi) is not evaluated; a bound for it goes into the bar.
    Zeros are assumed on the critical line.
    """
    if x < 1:
        raise InputError("explicit formula needs x >= 1")
    log_A = zs.log_conductor if log_A is None else log_A
    shifts = zs.gamma_shifts if gamma_shifts is None else gamma_shifts
    if log_A is None or shifts is None:
        raise InputError("need log A and the gamma shifts of the L-function")
    lx = math.log(x)
    g, m = zs.signed()
    z_terms = m * np.exp(1j * g * lx) * eta.eta_hat(g / (2 * math.pi))
    zero_sum = comp_sum(z_terms) if g.size else 0j
    zero_sum += zs.central_order * eta.eta_hat0
    main = (math.sqrt(x) * eta.laplace_half + eta.laplace(-0.5) / math.sqrt(x)) if trivial else 0.0
    d = len(shifts)
    log_term = float(eta.eta(np.array([lx]))[0]) * (log_A - d * math.log(math.pi))
    arch, qerr = _arch_integral(x, eta, shifts)
    h = eta_hat_as_h(eta)
    ztail = tail_bound(zs.height_max, h, log_A, zs.degree)
    dual = _dual_bound(x, eta, zs.degree)
    value = main - zero_sum + log_term + arch
    if zs.self_dual:
        value = value.real
    bar = ztail + qerr + dual
    return ExplicitResult(value, bar, zero_sum, main, log_term, arch, dual, ztail, qerr)


# -- induction ----------------------------------------------------------------------

@dataclass(frozen=True)
class InductionCheck:
    lhs: complex | float
    rhs: complex | float
    diff: float
    relative: float


def cyclotomic_tower(q: int, subgroup) -> tuple[FrobeniusOracle, FrobeniusOracle, SubgroupEmbedding]:
    """(L/K oracle, L/F oracle, embedding) for Q(zeta_q) / K / Q with Gal(L/K) = H."""
    from .groups.induction import units_subgroup

    return relative_cyclotomic_oracle(q, subgroup), cyclotomic_oracle(q), units_subgroup(q, subgroup)


def induction_check(x: float, rel: FrobeniusOracle, absolute: FrobeniusOracle,
                    emb: SubgroupEmbedding, t: ClassFunction, eta: WeightEta,
                    tol: float = 1e-12, ceiling: int = DEFAULT_CEILING) -> InductionCheck:
    """psi_eta(x; L/K, t) against psi_eta(x; L/F, Ind t)."""
    lhs = psi_eta(x, rel, t, eta, tol, ceiling).value
    tp = induce(t, emb)
    rhs = psi_eta(x, absolute, tp, eta, tol, ceiling).value
    diff = abs(lhs - rhs)
    scale = max(abs(lhs), abs(rhs))
    return InductionCheck(lhs, rhs, diff, diff / scale if scale else 0.0)


# -- psi_eta on many points (moment integrals) ------------------------------------------

class PsiGrid:
    """psi_eta(e^u) for many u at once, for the gaussian weight.

    Prime power terms are binned by log N(P)^m; within a bin eta(y - u) is
    expanded in a Taylor series around the bin centre, so each evaluation
    costs (bins x order) operations. Hermite polynomials give the derivatives.
    """

    def __init__(self, oracle: FrobeniusOracle, t, eta: WeightEta, u_max: float,
                 tol: float = 1e-12, ceiling: int = DEFAULT_CEILING, bin_width: float = 1 / 256,
                 order: int = 7):
        if eta.name != "gaussian":
            raise InputError("PsiGrid supports the gaussian weight only")
        self.oracle, self.eta, self.order = oracle, eta, order
        self.vals = _class_values(t, oracle)
        self.R = eta.support_radius(tol)
        self.u_max = u_max
        hi = math.exp(u_max + self.R)
        terms = prime_power_terms(oracle, 1.0, hi, ceiling)
        rl, rw = ramified_terms(oracle, self.vals, 1.0, hi)
        y = np.concatenate([terms.log_value, rl])
        w = np.concatenate([terms.weight * self.vals[terms.cls], rw])
        nb = int(math.ceil((u_max + self.R) / bin_width)) + 1
        b = np.minimum((y / bin_width).astype(np.int64), nb - 1)
        self.centres = (np.arange(nb) + 0.5) * bin_width
        dlt = y - self.centres[b]
        dtype = np.complex128 if np.iscomplexobj(w) else np.float64
        self.moments = np.zeros((order + 1, nb), dtype=dtype)
        p = np.ones_like(dlt)
        for k in range(order + 1):
            c = w * p / math.factorial(k)
            if np.iscomplexobj(c):
                self.moments[k] = (np.bincount(b, c.real, nb) + 1j * np.bincount(b, c.imag, nb))
            else:
                self.moments[k] = np.bincount(b, c, nb)
            p = p * dlt
        self.tmax = float(np.max(np.abs(self.vals)))
        self.remainder_bound = self._remainder_bound(float(np.sum(np.abs(w))), bin_width)
        self.n_terms = int(y.size)

    def _remainder_bound(self, total: float, h: float) -> float:
        # |eta^(K+1)| <= sqrt((K+1)!) for the gaussian; |delta| <= h/2
        k = self.order + 1
        return total * math.sqrt(math.factorial(k)) * (h / 2) ** k / math.factorial(k)

    def __call__(self, u) -> np.ndarray:
        u = np.atleast_1d(np.asarray(u, dtype=float))
        if np.any(u > self.u_max + 1e-12):
            raise InputError("u beyond the range prepared for this grid")
        out = np.zeros(u.shape, dtype=self.moments.dtype)
        for i, uu in enumerate(u):
            lo = np.searchsorted(self.centres, uu - self.R - 1)
            hi = np.searchsorted(self.centres, uu + self.R + 1)
            v = self.centres[lo:hi] - uu
            g = np.exp(-0.5 * v * v)
            acc = 0.0
            # eta^(k)(v) = (-1)^k He_k(v) eta(v)
            he_prev, he = np.zeros_like(v), np.ones_like(v)
            for k in range(self.order + 1):
                acc = acc + ((-1) ** k) * np.dot(self.moments[k, lo:hi], he * g)
                he_prev, he = he, v * he - k * he_prev
            out[i] = acc
        return out if np.iscomplexobj(out) else out.real

    def bar(self, u: float) -> float:
        x = math.exp(u)
        return (truncation_bar(x, self.eta, self.R, self.tmax, self.oracle.base_degree)
                + ramified_bar(x, self.oracle, self.eta, self.tmax) + self.remainder_bound)
