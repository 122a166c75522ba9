"""Test functions: the prime-side weight eta, the averaging weight Phi, h = eta_hat^2.

Fourier convention: f_hat(xi) = int f(u) exp(-2 pi i xi u) du.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate, interpolate

from .errors import InputError

DEFAULT_DELTA = 0.25
GRID_T = (40.0, 0.05)
GRID_XI = (40.0, 0.05)
SUPPORT_TOL = 1e-12

Fn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class WeightEta:
    name: str
    delta: float
    eta: Fn
    eta_prime: Fn
    eta_hat: Fn
    laplace: Callable[[float], float]  # w -> int exp(w u) eta(u) du, real w
    laplace_half: float
    alpha: float  # int eta_hat(xi)^2 d xi
    eta_hat0: float
    support: float | None = None  # exact support radius when compactly supported
    constants_error: float = 0.0

    def support_radius(self, tol: float = SUPPORT_TOL) -> float:
        """Smallest R with |eta(u)| < tol for |u| > R."""
        if self.support is not None:
            return self.support
        if self.name == "gaussian":
            return math.sqrt(2.0 * math.log(1.0 / tol))
        # generic fallback: scan outward
        r = 0.0
        while abs(float(self.eta(np.array([r]))[0])) >= tol:
            r += 0.01
        return r


@dataclass(frozen=True, eq=False)
class WeightPhi:
    name: str
    phi: Fn
    phi_hat: Fn
    integral: float  # over the whole line
    support: float | None = None

    @property
    def half_integral(self) -> float:
        """int_0^inf Phi (Phi is even)."""
        return 0.5 * self.integral

    def cutoff(self, tol: float = SUPPORT_TOL) -> float:
        """Radius beyond which Phi(u) < tol * max Phi."""
        if self.support is not None:
            return self.support
        if self.name == "gaussian":
            return math.sqrt(2.0 * math.log(1.0 / tol))
        raise InputError(f"no cutoff rule for {self.name}")


@dataclass(frozen=True, eq=False)
class TestFunctionH:
    """h(xi) >= 0 together with a non-increasing majorant used for tail bounds."""

    name: str
    h: Fn
    majorant: Fn
    h0: float
    integral: float
    delta: float
    envelope_constant: float = field(default=1.0)
    gaussian_rate: float | None = None  # h(xi) = h0 exp(-rate xi^2) when set


# -- gaussian --------------------------------------------------------------

SQRT2PI = math.sqrt(2.0 * math.pi)


def _gaussian_eta(delta: float) -> WeightEta:
    return WeightEta(
        name="gaussian",
        delta=delta,
        eta=lambda u: np.exp(-0.5 * np.asarray(u, dtype=float) ** 2),
        eta_prime=lambda u: -np.asarray(u, dtype=float) * np.exp(-0.5 * np.asarray(u, dtype=float) ** 2),
        eta_hat=lambda xi: SQRT2PI * np.exp(-2.0 * math.pi ** 2 * np.asarray(xi, dtype=float) ** 2),
        laplace=lambda w: SQRT2PI * math.exp(0.5 * w * w),
        laplace_half=SQRT2PI * math.exp(0.125),
        alpha=math.sqrt(math.pi),
        eta_hat0=SQRT2PI,
    )


# -- self-convolved bump ---------------------------------------------------

_GL_X, _GL_W = np.polynomial.legendre.leggauss(400)


def _bump(u, r):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = np.abs(u) < r
    z = u[inside] / r
    out[inside] = np.exp(-1.0 / (1.0 - z * z))
    return out


def _gl(f, a, b, x=_GL_X, w=_GL_W):
    """Gauss-Legendre on [a, b] (vectorised over rows of a, b)."""
    a = np.asarray(a, dtype=float)[..., None]
    b = np.asarray(b, dtype=float)[..., None]
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return np.sum(f(mid + half * x) * w, axis=-1) * half[..., 0]


def _selfconv_eta(delta: float, r: float = 1.0) -> WeightEta:
    """eta = eta1 * eta1 with eta1 the standard bump on [-r, r]."""
    xs = np.linspace(-r, r, 4001)
    x_gl, w_gl = np.polynomial.legendre.leggauss(1600)

    def hat1(xi):
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        u = r * x_gl
        vals = np.cos(2 * np.pi * np.outer(xi, u)) @ (_bump(u, r) * w_gl) * r
        return vals

    def conv_exact(u):
        u = np.atleast_1d(np.asarray(u, dtype=float))
        lo = np.maximum(-r, u - r)
        hi = np.minimum(r, u + r)
        hi = np.maximum(hi, lo)
        return _gl(lambda v: _bump(v, r) * _bump(u[:, None] - v, r), lo, hi)

    grid = np.linspace(-2 * r, 2 * r, 8001)
    spline = interpolate.CubicSpline(grid, conv_exact(grid), bc_type="clamped")

    def eta(u):
        u = np.asarray(u, dtype=float)
        out = spline(np.clip(u, -2 * r, 2 * r))
        return np.where(np.abs(u) >= 2 * r, 0.0, out)

    deriv = spline.derivative()

    def eta_prime(u):
        u = np.asarray(u, dtype=float)
        return np.where(np.abs(u) >= 2 * r, 0.0, deriv(np.clip(u, -2 * r, 2 * r)))

    def eta_hat(xi):
        shape = np.shape(xi)
        return (hat1(np.ravel(xi)) ** 2).reshape(shape)

    def lap1(w):
        return float(_gl(lambda u: np.exp(w * u) * _bump(u, r), -r, r))

    int1 = lap1(0.0)
    alpha = float(_gl(lambda u: conv_exact(u.ravel()).reshape(u.shape) ** 2, -2 * r, 2 * r))
    del xs
    return WeightEta(
        name="selfconv_bump",
        delta=delta,
        eta=eta,
        eta_prime=eta_prime,
        eta_hat=eta_hat,
        laplace=lambda w: lap1(w) ** 2,
        laplace_half=lap1(0.5) ** 2,
        alpha=alpha,
        eta_hat0=int1 ** 2,
        support=2 * r,
        constants_error=1e-10,
    )


_ETA_CACHE: dict[tuple, WeightEta] = {}


def builtin_eta(name: str, delta: float = DEFAULT_DELTA) -> WeightEta:
    key = (name, delta)
    if key not in _ETA_CACHE:
        if name == "gaussian":
            _ETA_CACHE[key] = _gaussian_eta(delta)
        elif name == "selfconv_bump":
            _ETA_CACHE[key] = _selfconv_eta(delta)
        else:
            raise InputError(f"unknown eta weight {name!r}")
    return _ETA_CACHE[key]


def builtin_phi(name: str) -> WeightPhi:
    if name == "gaussian":
        return WeightPhi(
            "gaussian",
            phi=lambda u: np.exp(-0.5 * np.asarray(u, dtype=float) ** 2),
            phi_hat=lambda xi: SQRT2PI * np.exp(-2.0 * math.pi ** 2 * np.asarray(xi, dtype=float) ** 2),
            integral=SQRT2PI,
        )
    if name == "triangle":
        return WeightPhi(
            "triangle",
            phi=lambda u: np.maximum(0.0, 1.0 - np.abs(np.asarray(u, dtype=float))),
            phi_hat=lambda xi: np.sinc(np.asarray(xi, dtype=float)) ** 2,
            integral=1.0,
            support=1.0,
        )
    raise InputError(f"unknown Phi weight {name!r}")


# -- h = eta_hat^2 ------------------------------------------------------------

def _hat_envelope(xi, delta):
    a = np.abs(np.asarray(xi, dtype=float))
    return 1.0 / ((a + 1.0) * np.log(a + 2.0) ** (2.0 + 2.0 * delta))


def _h_from(name: str, f: Fn, delta: float, integral: float) -> TestFunctionH:
    """Wrap a nonnegative even f with a running-max majorant (grid up to 200, envelope beyond)."""
    xmax, step = 200.0, 0.01
    grid = np.arange(0.0, xmax + step, step)
    hv = f(grid)
    runmax = np.maximum.accumulate(hv[::-1])[::-1]
    const = float(np.max(hv / _hat_envelope(grid, delta)))

    def majorant(xi):
        a = np.abs(np.asarray(xi, dtype=float))
        # grid value at a covers [a, a + step); read the left neighbour
        inner = np.interp(np.maximum(a - step, 0.0), grid, runmax)
        return np.where(a <= xmax, inner, const * _hat_envelope(a, delta))

    th = TestFunctionH(name, f, majorant, float(f(np.array([0.0]))[0]), integral, delta, const)
    bad = [c for c in validate_h(th) if c[2] < 0]
    if bad:
        raise InputError(f"h fails grid checks: {bad}")
    return th


def eta_to_h(w: WeightEta) -> TestFunctionH:
    """h = eta_hat^2."""
    if w.name == "gaussian":
        h = lambda xi: w.eta_hat(xi) ** 2  # noqa: E731
        return TestFunctionH("gaussian_h", h, h, float(h(0.0)), w.alpha, w.delta,
                             envelope_constant=float(h(0.0)), gaussian_rate=4 * math.pi ** 2)
    return _h_from(w.name + "_h", lambda xi: w.eta_hat(xi) ** 2, w.delta, w.alpha)


def eta_hat_as_h(w: WeightEta) -> TestFunctionH:
    """eta_hat itself as a zero-sum test function (the explicit formula needs it)."""
    if w.name == "gaussian":
        return TestFunctionH("gaussian_hat", w.eta_hat, w.eta_hat, w.eta_hat0, 1.0,
                             w.delta, envelope_constant=w.eta_hat0, gaussian_rate=2 * math.pi ** 2)
    # integral of eta_hat is eta(0)
    return _h_from(w.name + "_hat", w.eta_hat, w.delta, float(w.eta(np.array([0.0]))[0]))


# -- grid validation ---------------------------------------------------------

def _tail_check(ratio: np.ndarray, grid: np.ndarray) -> tuple[float, float]:
    """Stored constant = max on the inner half; margin = constant - max on the outer half."""
    a = np.abs(grid)
    edge = a.max() / 2
    inner = float(np.max(ratio[a <= edge]))
    outer_idx = np.argmax(np.where(a > edge, ratio, -np.inf))
    return float(grid[outer_idx]), inner - float(ratio[outer_idx])


def validate_weight(w, t_grid=GRID_T, xi_grid=GRID_XI) -> list[tuple[str, float, float]]:
    """Grid checks of the weight conditions; (condition, worst point, margin >= 0 means pass).

    The conditions are asymptotic envelopes; only finite grids are examined,
    so a pass here is evidence, not a proof.
    """
    tmax, tstep = t_grid
    xmax, xstep = xi_grid
    t = np.arange(-tmax, tmax + tstep / 2, tstep)
    xi = np.arange(-xmax, xmax + xstep / 2, xstep)
    out = []
    if isinstance(w, WeightEta):
        e = w.eta(t)
        asym = np.abs(e - w.eta(-t))
        i = int(np.argmax(asym))
        out.append(("even", float(t[i]), 1e-12 - float(asym[i])))
        hat = w.eta_hat(xi)
        i = int(np.argmin(hat))
        out.append(("hat_nonnegative", float(xi[i]), float(hat[i]) + 1e-15))
        env = np.exp((0.5 + w.delta) * np.abs(t))
        for label, f in (("eta_decay", e), ("eta_prime_decay", w.eta_prime(t))):
            pt, margin = _tail_check(np.abs(f) * env, t)
            out.append((label, pt, margin))
        pt, margin = _tail_check(np.abs(hat) / _hat_envelope(xi, w.delta), xi)
        out.append(("hat_envelope", pt, margin))
        return out
    if isinstance(w, WeightPhi):
        p = w.phi(t)
        asym = np.abs(p - w.phi(-t))
        i = int(np.argmax(asym))
        out.append(("even", float(t[i]), 1e-12 - float(asym[i])))
        i = int(np.argmin(p))
        out.append(("nonnegative", float(t[i]), float(p[i]) + 1e-15))
        ph = w.phi_hat(xi)
        i = int(np.argmin(ph))
        out.append(("hat_nonnegative", float(xi[i]), float(ph[i]) + 1e-15))
        pt, margin = _tail_check(np.abs(p) * (1 + t * t), t)
        out.append(("integrable", pt, margin))
        return out
    raise InputError("validate_weight expects a WeightEta or WeightPhi")


def validate_h(h: TestFunctionH, xi_grid=GRID_XI) -> list[tuple[str, float, float]]:
    xmax, xstep = xi_grid
    xi = np.arange(-xmax, xmax + xstep / 2, xstep)
    v = h.h(xi)
    out = []
    i = int(np.argmin(v))
    out.append(("nonnegative", float(xi[i]), float(v[i]) + 1e-15))
    excess = v - h.majorant(xi)
    i = int(np.argmax(excess))
    out.append(("majorant", float(xi[i]), 1e-14 - float(excess[i])))
    pt, margin = _tail_check(v / _hat_envelope(xi, h.delta), xi)
    out.append(("envelope", pt, margin))
    return out


def quad_check_constants(w: WeightEta) -> dict[str, tuple[float, float]]:
    """(stored, adaptive quadrature) pairs for the derived constants."""
    R = w.support if w.support is not None else 40.0
    lap = integrate.quad(lambda u: math.exp(0.5 * u) * float(w.eta(np.array([u]))[0]), -R, R,
                         epsabs=1e-13, epsrel=1e-13, limit=200)[0]
    lapm = integrate.quad(lambda u: math.exp(-0.5 * u) * float(w.eta(np.array([u]))[0]), -R, R,
                          epsabs=1e-13, epsrel=1e-13, limit=200)[0]
    hat0 = integrate.quad(lambda u: float(w.eta(np.array([u]))[0]), -R, R,
                          epsabs=1e-13, epsrel=1e-13, limit=200)[0]
    # frequency side on unit panels; a single infinite-range call misreads the oscillating tail
    sq = lambda x: float(w.eta_hat(np.array([x]))[0]) ** 2  # noqa: E731
    alpha = 2 * math.fsum(integrate.quad(sq, a, a + 1, epsabs=1e-15, epsrel=1e-13)[0]
                          for a in range(60))
    return {
        "laplace_half": (w.laplace_half, lap),
        "laplace_minus_half": (w.laplace(-0.5), lapm),
        "eta_hat0": (w.eta_hat0, hat0),
        "alpha": (w.alpha, alpha),
    }
