"""Zeros of Dirichlet L-functions on the critical line and the sums built from them.

Zeros are located as sign changes of the rotated completed function
Z(t) = Re(exp(i theta(t)) L(1/2 + i t, chi)) and refined with Brent's method.
L is evaluated through Hurwitz zeta values computed by Euler-Maclaurin
summation. Completeness up to T_max is certified by comparing the number of
located zeros with the smooth count theta(T)/pi along the whole range.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field, replace
from typing import TextIO

import numpy as np
from scipy import optimize, special

from .errors import CertificationError, DataFormatError, InputError, NumericError
from .groups import finite
from .groups.tables import character_table
from .summation import comp_sum
from .weights import TestFunctionH

COUNT_ENVELOPE = 1.0  # |N(T) - smooth count| allowed during certification
MAX_Q = 100
MAX_T = 100.0

# Bernoulli numbers B_2, B_4, ..., B_24
_B2K = [1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510,
        43867 / 798, -174611 / 330, 854513 / 138, -236364091 / 2730]


# -- Hurwitz zeta -------------------------------------------------------------------

def hurwitz_zeta(s, alpha: float, n_terms: int | None = None) -> np.ndarray:
    """zeta(s, alpha) for 0 < alpha <= 1 by Euler-Maclaurin, vectorised over s.

    With N >= |s| + 10 direct terms and twelve correction terms the
    remainder is below (|s| / (2 pi (N + alpha)))^25, far under double
    precision on the critical strip.
    """
    s = np.atleast_1d(np.asarray(s, dtype=np.complex128))
    if not 0 < alpha <= 1:
        raise InputError("Hurwitz parameter must lie in (0, 1]")
    if np.any(np.abs(s - 1) < 1e-12):
        raise InputError("Hurwitz zeta has a pole at s = 1")
    N = n_terms if n_terms is not None else int(np.max(np.abs(s))) + 10
    logs = np.log(np.arange(N) + alpha)
    head = np.exp(-np.outer(s, logs)).sum(axis=1)
    a = N + alpha
    la = math.log(a)
    tail = np.exp((1 - s) * la) / (s - 1) + 0.5 * np.exp(-s * la)
    rising = s.copy()  # s (s+1) ... (s+2k-2)
    power = np.exp(-(s + 1) * la)  # a^(-s-2k+1) at k = 1
    fact = 2.0
    for k, b in enumerate(_B2K, start=1):
        tail = tail + b / fact * rising * power
        rising = rising * (s + 2 * k - 1) * (s + 2 * k)
        power = power / (a * a)
        fact *= (2 * k + 1) * (2 * k + 2)
    return head + tail


# -- Dirichlet characters -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    modulus: int
    values: np.ndarray  # length modulus, zero off the units
    label: str

    @property
    def parity(self) -> int:
        if self.modulus <= 2:
            return 0
        return 0 if self.values[self.modulus - 1].real > 0 else 1

    @property
    def is_real(self) -> bool:
        return bool(np.all(np.abs(self.values.imag) < 1e-12))

    def conductor(self) -> int:
        q = self.modulus
        for d in (x for x in range(1, q + 1) if q % x == 0):
            ok = all(abs(self.values[a] - 1) < 1e-9 for a in range(q)
                     if math.gcd(a, q) == 1 and a % d == 1 % d)
            if ok:
                return d
        return q

    def primitive(self) -> "DirichletCharacter":
        d = self.conductor()
        if d == self.modulus:
            return self
        q = self.modulus
        vals = np.zeros(d, dtype=np.complex128)
        for b in range(d):
            if math.gcd(b, d) != 1:
                continue
            a = next(b + k * d for k in range(q) if math.gcd(b + k * d, q) == 1)
            vals[b] = self.values[a % q]
        if d == 1:
            vals = np.ones(1, dtype=np.complex128)
        return DirichletCharacter(d, vals, f"{self.label}*")

    def conj(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, self.values.conj(), self.label + "~")

    def gauss_sum(self) -> complex:
        q = self.modulus
        if q == 1:
            return 1.0 + 0j
        a = np.arange(q)
        return complex(np.sum(self.values * np.exp(2j * np.pi * a / q)))

    def root_number(self) -> complex:
        """epsilon with Lambda(s, chi) = epsilon Lambda(1 - s, conj chi), chi primitive."""
        q = self.modulus
        return self.gauss_sum() / ((1j ** self.parity) * math.sqrt(q))


def dirichlet_character(q: int, index: int) -> DirichletCharacter:
    """Character number ``index`` of the units(q) table, as a function on Z/q."""
    if q < 1:
        raise InputError("modulus must be positive")
    if q == 1:
        if index != 0:
            raise InputError("modulus 1 has only the trivial character")
        return DirichletCharacter(1, np.ones(1, dtype=np.complex128), "1,0")
    t = character_table(finite.units(q))
    if not 0 <= index < t.num_chars:
        raise InputError(f"character index {index} out of range for modulus {q}")
    vals = np.zeros(q, dtype=np.complex128)
    for j, a in enumerate(finite.residues(t.group)):
        vals[a] = t.values[index, j]
    return DirichletCharacter(q, vals, f"{q},{index}")


def dirichlet_L(s, chi: DirichletCharacter) -> np.ndarray:
    """L(s, chi) = q^-s sum_a chi(a) zeta(s, a/q)."""
    s = np.atleast_1d(np.asarray(s, dtype=np.complex128))
    q = chi.modulus
    total = np.zeros_like(s)
    for a in range(1, q + 1):
        c = chi.values[a % q]
        if c != 0:
            total += c * hurwitz_zeta(s, a / q)
    return total * np.exp(-s * math.log(q))


def theta(t, chi: DirichletCharacter) -> np.ndarray:
    """Phase making exp(i theta) L(1/2 + i t) real, chi primitive."""
    t = np.asarray(t, dtype=float)
    q, a = chi.modulus, chi.parity
    eps = chi.root_number()
    return 0.5 * t * math.log(q / math.pi) + special.loggamma((0.5 + a + 1j * t) / 2).imag \
        - 0.5 * cmath.phase(eps)


def z_function(t, chi: DirichletCharacter) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    val = np.exp(1j * theta(t, chi)) * dirichlet_L(0.5 + 1j * t, chi)
    return val.real


# -- zero sets ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ZeroSet:
    """Critical-line zeros of one L-function.

    ``ordinates`` are the positive ordinates of L(s, chi). For a character that is
    not self-dual, ``conj_ordinates`` are the positive ordinates of L(s, conj chi),
    i.e. minus the negative ordinates of L(s, chi).
    """

    label: str
    ordinates: np.ndarray
    mults: np.ndarray
    self_dual: bool = True
    central_order: int = 0
    height_max: float = 0.0
    source: str = "computed"
    conj_ordinates: np.ndarray = field(default_factory=lambda: np.zeros(0))
    conj_mults: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    log_conductor: float | None = None
    degree: int = 1  # chi(1) [K:Q]
    gamma_shifts: tuple[int, ...] | None = None  # mu_j in prod Gamma_R(s + mu_j)
    issues: tuple[str, ...] = ()

    def __post_init__(self):
        for name in ("ordinates", "conj_ordinates"):
            v = np.asarray(getattr(self, name), dtype=float)
            v.setflags(write=False)
            object.__setattr__(self, name, v)
        for name in ("mults", "conj_mults"):
            v = np.asarray(getattr(self, name), dtype=np.int64)
            v.setflags(write=False)
            object.__setattr__(self, name, v)
        if self.mults.shape != self.ordinates.shape or self.conj_mults.shape != self.conj_ordinates.shape:
            raise InputError("ordinates and multiplicities must have equal length")

    def signed(self) -> tuple[np.ndarray, np.ndarray]:
        """All nonzero ordinates of L(s, chi) with sign, ascending by |gamma|."""
        if self.self_dual:
            g = np.concatenate([self.ordinates, -self.ordinates])
            m = np.concatenate([self.mults, self.mults])
        else:
            g = np.concatenate([self.ordinates, -self.conj_ordinates])
            m = np.concatenate([self.mults, self.conj_mults])
        order = np.lexsort((g, np.abs(g)))
        return g[order], m[order]

    def conjugate(self) -> "ZeroSet":
        if self.self_dual:
            return self
        return replace(self, label=self.label + "~", ordinates=self.conj_ordinates,
                       mults=self.conj_mults, conj_ordinates=self.ordinates, conj_mults=self.mults)

    def count_abs_in(self, lo: float, hi: float) -> int:
        """Zeros (with multiplicity, both signs) with lo < |gamma| <= hi."""
        g, m = self.signed()
        a = np.abs(g)
        return int(np.sum(m[(a > lo) & (a <= hi)]))


def _sign_change_zeros(chi: DirichletCharacter, t_max: float, step: float, xtol: float) -> np.ndarray:
    grid = np.arange(step / 2, t_max + step / 2, step)
    grid = grid[grid <= t_max]
    if grid.size == 0 or grid[-1] < t_max:
        grid = np.append(grid, t_max)
    z = z_function(grid, chi)
    out = []
    f = lambda t: float(z_function([t], chi)[0])  # noqa: E731
    for i in np.flatnonzero(np.sign(z[:-1]) * np.sign(z[1:]) < 0):
        out.append(optimize.brentq(f, grid[i], grid[i + 1], xtol=xtol, rtol=4 * np.finfo(float).eps,
                                   maxiter=200))
    for i in np.flatnonzero(z == 0):
        out.append(float(grid[i]))
    return np.array(sorted(out))


def smooth_count(T, chi: DirichletCharacter) -> np.ndarray:
    """Expected number of zeros with 0 < gamma <= T: theta(T)/pi, plus 1 for the pole of zeta.

    The phase includes -arg(epsilon)/2; keeping it (rather than subtracting
    theta(0)) centres the discrepancy at zero for complex characters.
    """
    T = np.asarray(T, dtype=float)
    return theta(T, chi) / math.pi + (1.0 if chi.modulus == 1 else 0.0)


def count_discrepancy(zeros: np.ndarray, chi: DirichletCharacter, t_max: float) -> tuple[float, float]:
    """max |N(T) - smooth count| over midpoints between located zeros and T_max; (value, worst T)."""
    pts = []
    if zeros.size:
        pts.append(zeros[0] / 2)
        pts.extend(0.5 * (zeros[1:] + zeros[:-1]))
    pts.append(t_max)
    pts = np.array(pts)
    counts = np.searchsorted(zeros, pts, side="right")
    diff = counts - smooth_count(pts, chi)
    i = int(np.argmax(np.abs(diff)))
    return float(diff[i]), float(pts[i])


def _certified_zeros(chi: DirichletCharacter, t_max: float, step: float, xtol: float):
    for _ in range(4):
        z = _sign_change_zeros(chi, t_max, step, xtol)
        d, at = count_discrepancy(z, chi, t_max)
        if abs(d) <= COUNT_ENVELOPE:
            return z, d
        step /= 4
    raise CertificationError(
        f"zero count for {chi.label} off by {d:.3f} near T = {at:.3f}; a zero may be missing")


def find_dirichlet_zeros(q: int, index: int, t_max: float, step: float = 0.05,
                         xtol: float = 1e-10) -> ZeroSet:
    """Zeros of L(s, chi) for chi = character ``index`` mod q, reduced to its primitive form."""
    if q > MAX_Q or t_max > MAX_T:
        raise InputError(f"zero finding limited to q <= {MAX_Q} and T_max <= {MAX_T}")
    if t_max <= 0 or step <= 0:
        raise InputError("T_max and step must be positive")
    chi = dirichlet_character(q, index).primitive()
    zeros, _ = _certified_zeros(chi, t_max, step, xtol)
    self_dual = chi.is_real
    conj = np.zeros(0)
    if not self_dual:
        conj, _ = _certified_zeros(chi.conj(), t_max, step, xtol)
    return ZeroSet(
        label=f"dirichlet:{q},{index}",
        ordinates=zeros,
        mults=np.ones(zeros.size, dtype=np.int64),
        self_dual=self_dual,
        height_max=float(t_max),
        conj_ordinates=conj,
        conj_mults=np.ones(conj.size, dtype=np.int64),
        log_conductor=math.log(chi.modulus),
        degree=1,
        gamma_shifts=(chi.parity,),
    )


def certify(zs: ZeroSet, chi: DirichletCharacter) -> float:
    """Largest count discrepancy of a zero set against the smooth count of a primitive chi."""
    d1, _ = count_discrepancy(np.repeat(zs.ordinates, zs.mults), chi, zs.height_max)
    if zs.self_dual:
        return abs(d1)
    d2, _ = count_discrepancy(np.repeat(zs.conj_ordinates, zs.conj_mults), chi.conj(), zs.height_max)
    return max(abs(d1), abs(d2))


# -- file format --------------------------------------------------------------------

def dump_zeros(zs: ZeroSet, out: TextIO) -> None:
    head = [f"zeros {zs.label}", f"selfdual={int(zs.self_dual)}", f"central={zs.central_order}",
            f"height={zs.height_max!r}"]
    if zs.log_conductor is not None:
        head.append(f"logA={zs.log_conductor!r}")
    head.append(f"degree={zs.degree}")
    if zs.gamma_shifts is not None:
        head.append("shifts=" + "/".join(map(str, zs.gamma_shifts)))
    out.write(" ".join(head) + "\n")
    for g, m in zip(zs.ordinates, zs.mults):
        out.write(f"{float(g)!r} {int(m)}\n")
    for g, m in zip(zs.conj_ordinates, zs.conj_mults):
        out.write(f"{-float(g)!r} {int(m)}\n")


def ingest_zeros(src: TextIO) -> ZeroSet:
    """Parse a zero file. Negative ordinates are zeros of L(s, chi) below the real axis."""
    head = None
    pos, neg = [], []
    for n, raw in enumerate(src, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        w = line.split()
        if head is None:
            if w[0] != "zeros" or len(w) < 2:
                raise DataFormatError("zero file must start with a 'zeros <label> ...' header")
            head = {"label": w[1]}
            for kv in w[2:]:
                k, sep, v = kv.partition("=")
                if not sep:
                    raise DataFormatError(f"line {n}: malformed header field {kv!r}")
                head[k] = v
            continue
        try:
            g = float(w[0])
            m = int(w[1]) if len(w) > 1 else 1
        except ValueError as exc:
            raise DataFormatError(f"line {n}: {exc}") from None
        if m < 1 or g == 0 or not math.isfinite(g):
            raise DataFormatError(f"line {n}: need a nonzero ordinate and a positive multiplicity")
        (pos if g > 0 else neg).append((abs(g), m))
    if head is None:
        raise DataFormatError("empty zero file")
    try:
        self_dual = head.get("selfdual", "1") == "1"
        central = int(head.get("central", "0"))
        height = float(head.get("height", "0"))
        log_a = float(head["logA"]) if "logA" in head else None
        degree = int(head.get("degree", "1"))
        shifts = tuple(int(x) for x in head["shifts"].split("/")) if "shifts" in head else None
    except ValueError as exc:
        raise DataFormatError(f"bad header value: {exc}") from None
    issues = []
    pos.sort()
    neg.sort()
    if self_dual and neg:
        issues.append("negative ordinates in a self-dual zero set were ignored")
        neg = []
    for name, lst in (("positive", pos), ("negative", neg)):
        gs = [g for g, _ in lst]
        if any(b <= a for a, b in zip(gs, gs[1:])):
            issues.append(f"repeated {name} ordinates")
        if gs and gs[-1] > height:
            issues.append(f"{name} ordinates above the stated height")
    if log_a is not None and height > 0:
        main = _integrated_main(height, log_a, degree)
        counted = sum(m for _, m in pos) + (sum(m for _, m in neg) if not self_dual else sum(m for _, m in pos))
        if abs(counted - main) > 4 * _window_envelope(height, log_a, degree) + 2:
            issues.append(f"count {counted} below height far from main term {main:.2f}")
    for msg in issues:
        warnings.warn(f"zero file {head['label']}: {msg}", stacklevel=2)
    return ZeroSet(
        label=head["label"],
        ordinates=np.array([g for g, _ in pos]),
        mults=np.array([m for _, m in pos], dtype=np.int64),
        self_dual=self_dual,
        central_order=central,
        height_max=height,
        source="ingested",
        conj_ordinates=np.array([g for g, _ in neg]),
        conj_mults=np.array([m for _, m in neg], dtype=np.int64),
        log_conductor=log_a,
        degree=degree,
        gamma_shifts=shifts,
        issues=tuple(issues),
    )


# -- counting -------------------------------------------------------------------------

def window_main_term(T: float, eps: float, log_A: float, degree: int) -> float:
    """(eps/pi) log(A ((T + eps)/(2 pi e))^degree), both signs counted."""
    return eps / math.pi * (log_A + degree * math.log((T + eps) / (2 * math.pi * math.e)))


def _integrated_main(T: float, log_A: float, degree: int) -> float:
    """Both-sign count below T from the density (1/pi) log(A (t/2pi)^d)."""
    if T <= 0:
        return 0.0
    x = T / (2 * math.pi)
    return T / math.pi * log_A + degree * 2 * x * (math.log(x) - 1) if x > 0 else 0.0


def _window_envelope(T: float, log_A: float, degree: int) -> float:
    """Engineering bound for the per-sign counting error near height T."""
    return 0.2 * (log_A + degree * math.log(T + 3)) + 2.0


def zero_count_window(zs: ZeroSet, T: float, eps: float, log_A: float, degree: int = 1):
    """(counted in T < |gamma| <= T + eps, main term, counted - main)."""
    if not 0 < eps <= 1:
        raise InputError("window width must satisfy 0 < eps <= 1")
    if T + eps > zs.height_max:
        raise InputError(f"window ends above the certified height {zs.height_max}")
    counted = zs.count_abs_in(T, T + eps)
    main = window_main_term(T, eps, log_A, degree)
    return counted, main, counted - main


# -- zero sums ------------------------------------------------------------------------

def tail_bound(T: float, h: TestFunctionH, log_A: float, degree: int,
               windows: int = 200000) -> float:
    """Bound for sum over |gamma| > T of h(gamma/2pi), both signs.

    Unit windows are charged with the main-term count plus the counting
    envelope, at the largest value of the majorant in the window. Beyond the
    last window the decay envelope is integrated against the same density.
    """
    T = max(T, 1.0)
    starts = T + np.arange(windows, dtype=float)
    dens = _window_count_bound(starts, log_A, degree)
    total = float(np.sum(h.majorant(starts / (2 * math.pi)) * dens))
    X = float(starts[-1] + 1)
    total += _remainder(X, h, log_A, degree)
    return total


def _window_count_bound(starts, log_A, degree):
    """Both-sign zero count in (s, s + 1]: main term plus twice the per-sign envelope, twice."""
    return (np.maximum(window_main_term_vec(starts, 1.0, log_A, degree), 0.0)
            + 4.0 * (0.2 * (log_A + degree * np.log(starts + 4)) + 2.0))


def _remainder(X: float, h: TestFunctionH, log_A: float, degree: int) -> float:
    # density per unit height is at most a + b log t
    a = (log_A + 10) * 2
    b = 2 * degree
    if h.gaussian_rate is not None:
        # log t <= log X + (t - X)/X; int_X^inf e^(-k (t/2pi)^2) dt via erfc
        k = h.gaussian_rate / (4 * math.pi ** 2)
        z = math.sqrt(k) * X
        mass = 0.5 * math.sqrt(math.pi / k) * special.erfc(z)
        return h.h0 * (a + b * math.log(X) + b) * mass
    V = math.log(X / (2 * math.pi))
    if V <= 1:
        return float("inf")
    c = h.envelope_constant * 2 * math.pi
    a2 = a + b * math.log(2 * math.pi)
    return c * (a2 * V ** (-1 - 2 * h.delta) / (1 + 2 * h.delta) + b * V ** (-2 * h.delta) / (2 * h.delta))


def window_main_term_vec(T, eps, log_A, degree):
    T = np.asarray(T, dtype=float)
    return eps / math.pi * (log_A + degree * np.log((T + eps) / (2 * math.pi * math.e)))


def _log_A(zs: ZeroSet, log_A: float | None) -> float:
    if log_A is not None:
        return log_A
    if zs.log_conductor is None:
        raise InputError(f"zero set {zs.label} has no conductor; pass log_A")
    return zs.log_conductor


def b_sum(zs: ZeroSet, h: TestFunctionH, include_central: bool = True,
          log_A: float | None = None, tol: float | None = None) -> tuple[float, float]:
    """(sum over zeros of h(gamma/2pi), tail bound). Central zeros enter only when asked."""
    g, m = zs.signed()
    terms = m * h.h(g / (2 * math.pi))
    val = comp_sum(terms)
    if include_central and zs.central_order:
        val += zs.central_order * h.h0
    if zs.height_max <= 0:
        bar = float("inf")
    else:
        bar = tail_bound(zs.height_max, h, _log_A(zs, log_A), zs.degree)
    if tol is not None and bar > tol:
        raise NumericError(f"tail bound {bar:.3g} for {zs.label} exceeds tolerance {tol:.3g}")
    return float(val), bar


def variance_nu(coeffs, zerosets: dict, h: TestFunctionH) -> tuple[float, float]:
    """nu = sum |c_chi|^2 b_0(chi; h), with the summed tail bounds."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    terms, bars = [], []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        if i not in zerosets:
            raise InputError(f"no zero set for character {i} in the support")
        b, bar = b_sum(zerosets[i], h, include_central=False)
        terms.append(abs(c) ** 2 * b)
        bars.append(abs(c) ** 2 * bar)
    return float(comp_sum(np.array(terms))), float(sum(bars))


def w4(coeffs, zerosets: dict, h: TestFunctionH) -> float:
    """sum |c|^4 b_0 / (sum |c|^2 b_0)^2."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    num, den = [], []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        if i not in zerosets:
            raise InputError(f"no zero set for character {i} in the support")
        b, _ = b_sum(zerosets[i], h, include_central=False)
        num.append(abs(c) ** 4 * b)
        den.append(abs(c) ** 2 * b)
    d = comp_sum(np.array(den))
    if d <= 0:
        raise NumericError("w4 needs a positive variance")
    return float(comp_sum(np.array(num)) / d**2)


def dirichlet_zerosets(q: int, t_max: float, step: float = 0.05) -> dict[int, ZeroSet]:
    """Zero sets for every character of units(q), keyed by character index."""
    n = character_table(finite.units(q)).num_chars if q > 1 else 1
    return {i: find_dirichlet_zeros(q, i, t_max, step) for i in range(n)}
