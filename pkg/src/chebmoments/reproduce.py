"""Named verification suites: each returns (name, passed, detail) records."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import groups as G
from .chebotarev import cyclotomic_oracle, explicit_formula_rhs, psi_eta, trivial_oracle
from .groups import closed_forms as cf
from .lfunc_zeros import find_dirichlet_zeros
from .moments import s2l_trials
from .weights import builtin_eta


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{self.name}: {'PASS' if self.passed else 'FAIL'} ({self.detail})"


def _rotation_pair(tab):
    return G.indicator(tab, [tab.group.class_index("r1")])


def prop21(tol: float = 1e-12) -> list[Check]:
    """S_t on D_n, n odd in 3..51, for |D_n| 1_e, 1_{sigma, sigma^-1} and their mix."""
    e1 = e2 = e3 = 0.0
    below = True
    for n in range(3, 52, 2):
        tab = G.character_table(G.dihedral(n))
        delta = G.delta_identity(tab, scaled=True)
        pair = _rotation_pair(tab)
        e1 = max(e1, abs(G.s_t(delta) - 1 / (2 * n - 1)))
        e2 = max(e2, abs(G.s_t(pair) - (1 - 2 / n) / (2 * (1 - 1 / n))))
        if n >= 5:
            mix = G.s_t(G.delta_identity(tab) * 2 + pair)
            below &= mix < 2 / 3
            e3 = max(e3, abs(mix - float(cf.dihedral_s_mixed(n))))
    return [
        Check("dihedral S(|G|1_e) = 1/(2n-1)", e1 <= tol, f"max err {e1:.3g}"),
        Check("dihedral S(1_{s,s^-1}) = (1-2/n)/(2(1-1/n))", e2 <= tol, f"max err {e2:.3g}"),
        Check("dihedral S(2*1_e+1_{s,s^-1}) < 2/3 for n >= 5", below, "strict"),
        Check("dihedral S(2*1_e+1_{s,s^-1}) = (2n-4)/(3n-4)", e3 <= tol, f"max err {e3:.3g}"),
    ]


def _affine_values(p: int):
    tab = G.character_table(G.affine(p))
    delta = G.delta_identity(tab, scaled=True)
    theta = G.character(tab, tab.labels.index("theta"))
    return tab, delta, theta


def prop23(tol: float = 1e-12, primes=(3, 5, 7, 11, 13)) -> list[Check]:
    """S_t and the lambda norms on Aff(F_p)."""
    e_stated = e_closed = e_theta = 0.0
    lam_ok = True
    for p in primes:
        tab, delta, theta = _affine_values(p)
        s = G.s_t(delta)
        e_stated = max(e_stated, abs(s - 1 / (p * (1 - 2 / p + 2 / p ** 2))))
        e_closed = max(e_closed, abs(s - float(cf.affine_s_scaled_identity(p))))
        e_theta = max(e_theta, abs(G.s_t(theta) - 1 / (p - 1)))
        want = cf.affine_lambdas(p)
        got = {
            "l11_scaled_identity": G.lambda_norm(delta, 1, 1),
            "l12_scaled_identity": G.lambda_norm(delta, 1, 2),
            "l14_scaled_identity": G.lambda_norm(delta, 1, 4),
            "l12_theta": G.lambda_norm(theta, 1, 2),
            "l14_theta": G.lambda_norm(theta, 1, 4),
        }
        lam_ok &= all(round(got[k]) == want[k] and abs(got[k] - want[k]) < 1e-9 * max(1, want[k])
                      for k in want)
    return [
        Check("affine S(|G|1_e) = 1/(p(1-2/p+2/p^2))", e_stated <= tol, f"max err {e_stated:.3g}"),
        Check("affine S(|G|1_e) = (p-2)/(p^2-2p+2)", e_closed <= tol, f"max err {e_closed:.3g}"),
        Check("affine S(theta) = 1/(p-1)", e_theta <= tol, f"max err {e_theta:.3g}"),
        Check("affine lambda norms exact", lam_ok, "l11, l12, l14"),
    ]


def lambdas() -> list[Check]:
    ok = True
    for n in range(3, 52, 2):
        tab = G.character_table(G.dihedral(n))
        delta = G.delta_identity(tab, scaled=True)
        for (j, k), v in cf.dihedral_lambdas_scaled_identity(n).items():
            ok &= abs(G.lambda_norm(delta, j, k) - v) < 1e-9 * v
    checks = [Check("dihedral lambda norms of |G|1_e", ok, "n odd 3..51")]
    return checks + [c for c in prop23() if "lambda" in c.name]


def jsum(n_max: int = 101, tol: float = 1e-12) -> list[Check]:
    """sum_{h=1}^{(n-1)/2} cos(2 pi h j / n) = -1/2 for odd n and n not dividing j."""
    worst = 0.0
    for n in range(3, n_max + 1, 2):
        h = np.arange(1, (n - 1) // 2 + 1)
        for j in range(1, 2 * n):
            if j % n:
                worst = max(worst, abs(math.fsum(np.cos(2 * math.pi * ((h * j) % n) / n)) + 0.5))
    return [Check("half cosine sum = -1/2", worst < tol, f"max err {worst:.3g}")]


def s2l(trials: int = 1000, seed: int = 42) -> list[Check]:
    res = s2l_trials(trials, seed)
    holds = sum(1 for r in res if r.brute.real >= r.bound * (1 - 1e-12) - 1e-12)
    imag = max((abs(r.brute.imag) for r in res), default=0.0)
    return [
        Check("S_2l >= lower bound", holds == trials, f"{holds}/{trials} hold"),
        Check("S_2l real", imag < 1e-12, f"max |Im| {imag:.3g}"),
    ]


def explicit_instances(height: float = 60.0):
    """(label, oracle, class function, zero set, has pole) for zeta, mod 4 odd, all mod 5."""
    out = []
    triv = trivial_oracle()
    out.append(("zeta", triv, G.constant(triv.table), find_dirichlet_zeros(1, 0, height), True))
    o4 = cyclotomic_oracle(4)
    out.append(("mod4 odd", o4, G.character(o4.table, 1), find_dirichlet_zeros(4, 1, height), False))
    o5 = cyclotomic_oracle(5)
    for i in range(4):
        out.append((f"mod5 chi{i}", o5, G.character(o5.table, i), find_dirichlet_zeros(5, i, height), i == 0))
    return out


def explicit(xs=(1e2, 1e3, 1e4), max_bar: float = 0.5) -> list[Check]:
    eta = builtin_eta("gaussian")
    checks = []
    for label, oracle, t, zs, pole in explicit_instances():
        worst_ratio, worst_bar = 0.0, 0.0
        for x in xs:
            ps = psi_eta(x, oracle, t, eta)
            ex = explicit_formula_rhs(x, zs, eta, trivial=pole)
            bar = ps.bar + ex.bar
            worst_ratio = max(worst_ratio, abs(ps.value - ex.value) / bar if bar else math.inf)
            worst_bar = max(worst_bar, bar)
        checks.append(Check(f"explicit formula {label}", worst_ratio <= 1 and worst_bar < max_bar,
                            f"max diff/bar {worst_ratio:.3g}, max bar {worst_bar:.3g}"))
    return checks


SUITES = {"prop21": prop21, "prop23": prop23, "lambda": lambdas, "jsum": jsum, "s2l": s2l,
          "explicit": explicit}
