import math

import numpy as np
import pytest
from scipy import integrate

from chebmoments.errors import InputError
from chebmoments.weights import (builtin_eta, builtin_phi, eta_hat_as_h, eta_to_h,
                                 quad_check_constants, validate_h, validate_weight)

ETAS = ["gaussian", "selfconv_bump"]


def test_gaussian_constants_closed_form():
    w = builtin_eta("gaussian")
    assert w.laplace_half == pytest.approx(math.sqrt(2 * math.pi) * math.exp(0.125), rel=1e-15)
    assert w.alpha == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    assert w.eta_hat0 == pytest.approx(math.sqrt(2 * math.pi), rel=1e-15)


@pytest.mark.parametrize("name", ETAS)
def test_constants_match_quadrature(name):
    w = builtin_eta(name)
    for key, (stored, quad) in quad_check_constants(w).items():
        assert abs(stored - quad) <= 1e-10 * max(1.0, abs(quad)), key


@pytest.mark.parametrize("name", ETAS)
def test_laplace_even(name):
    w = builtin_eta(name)
    assert abs(w.laplace(0.5) - w.laplace(-0.5)) < 1e-10
    assert abs(w.laplace(0.5) - w.laplace_half) < 1e-10


@pytest.mark.parametrize("name", ETAS)
def test_transform_nonnegative(name):
    xi = np.linspace(-40, 40, 4001)
    assert np.all(builtin_eta(name).eta_hat(xi) >= -1e-15)


@pytest.mark.parametrize("name", ETAS)
def test_fourier_inversion(name):
    """Re-synthesise eta from its transform on [-5, 5]."""
    w = builtin_eta(name)
    xi = np.linspace(-12, 12, 24001)
    hat = w.eta_hat(xi)
    for u in np.linspace(-5, 5, 21):
        back = integrate.trapezoid(hat * np.cos(2 * np.pi * xi * u), xi)
        assert abs(back - float(w.eta(np.array([u]))[0])) < 1e-8


def test_gaussian_transform_by_quadrature():
    w = builtin_eta("gaussian")
    for xi in (0.0, 0.1, 0.37):
        q = integrate.quad(lambda u: math.exp(-u * u / 2) * math.cos(2 * math.pi * xi * u), -40, 40)[0]
        assert abs(q - float(w.eta_hat(np.array([xi]))[0])) < 1e-12


@pytest.mark.parametrize("name", ETAS)
def test_weight_grid_checks(name):
    for cond, _, margin in validate_weight(builtin_eta(name)):
        assert margin >= 0, cond


@pytest.mark.parametrize("name", ["gaussian", "triangle"])
def test_phi_grid_checks(name):
    for cond, _, margin in validate_weight(builtin_phi(name)):
        assert margin >= 0, cond


def test_triangle():
    phi = builtin_phi("triangle")
    assert phi.integral == 1.0
    assert integrate.quad(lambda u: float(phi.phi(np.array([u]))[0]), -1, 1)[0] == pytest.approx(1.0)
    xi = np.array([0.3, 1.7])
    want = (np.sin(np.pi * xi) / (np.pi * xi)) ** 2
    assert np.allclose(phi.phi_hat(xi), want, rtol=1e-14)
    assert phi.half_integral == 0.5


def test_h_gaussian():
    h = eta_to_h(builtin_eta("gaussian"))
    assert h.h0 == pytest.approx(2 * math.pi, rel=1e-15)
    xi = np.linspace(-3, 3, 13)
    assert np.allclose(h.h(xi), 2 * math.pi * np.exp(-4 * math.pi ** 2 * xi ** 2), rtol=1e-14)


@pytest.mark.parametrize("name", ETAS)
def test_h_integral_is_alpha(name):
    w = builtin_eta(name)
    h = eta_to_h(w)
    f = lambda x: float(h.h(np.array([x]))[0])  # noqa: E731
    q = 2 * math.fsum(integrate.quad(f, a, a + 1, epsabs=1e-15, epsrel=1e-13)[0] for a in range(60))
    assert q == pytest.approx(w.alpha, rel=1e-9)
    for cond, _, margin in validate_h(h):
        assert margin >= 0, cond


@pytest.mark.parametrize("name", ETAS)
def test_majorant_dominates(name):
    for h in (eta_to_h(builtin_eta(name)), eta_hat_as_h(builtin_eta(name))):
        xi = np.linspace(0, 60, 6001)
        assert np.all(h.h(xi) <= h.majorant(xi) + 1e-14)


def test_unknown_names():
    with pytest.raises(InputError):
        builtin_eta("box")
    with pytest.raises(InputError):
        builtin_phi("box")
