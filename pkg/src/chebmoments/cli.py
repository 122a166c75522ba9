"""Command-line driver. Reports are ``key: value`` lines; exit codes 0, 2 usage, 3 numeric, 4 data."""

from __future__ import annotations

import argparse
import io
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import groups as G
from .chebotarev import builtin_oracle, psi_eta
from .conductors import (builtin_conductors, conductor_data, load_filtrations, pointwise_bounds)
from .config import Config, load_config
from .errors import ChebMomentsError, DataFormatError, InputError, NumericError
from .groups.textio import dump_table, load_class_function, load_table
from .lfunc_zeros import (certify, dirichlet_character, dirichlet_zerosets, dump_zeros,
                          find_dirichlet_zeros, ingest_zeros, variance_nu, w4)
from .moments import (EmpiricalMoments, dtilde_truncated, omega_report, gaussian_lower_bound)
from .reproduce import SUITES, s2l
from .weights import builtin_eta, builtin_phi, eta_to_h


def _fmt(v) -> str:
    if isinstance(v, complex):
        return f"{v.real!r}{v.imag:+r}j" if v.imag else repr(v.real)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _kv(key: str, value) -> str:
    return f"{key}: {_fmt(value)}"


def _class_function(source: str, table):
    if os.path.exists(source):
        with open(source) as fh:
            return load_class_function(fh, table)
    return G.class_function_from_expression(table, source)


def _ext_zerosets(ext: str, table, zero_files, t_max: float) -> dict:
    sets = {}
    for item in zero_files or []:
        idx, _, path = item.partition("=")
        try:
            with open(path) as fh:
                sets[int(idx)] = ingest_zeros(fh)
        except (OSError, ValueError) as exc:
            raise InputError(f"cannot read zero file {item!r}: {exc}") from None
    kind, _, rest = ext.partition(":")
    if kind == "cyclotomic":
        computed = dirichlet_zerosets(int(rest), t_max)
        for i, zs in computed.items():
            sets.setdefault(i, zs)
    return sets


# -- subcommands ---------------------------------------------------------------------

def cmd_group_table(a, cfg: Config) -> list[str]:
    tab = G.character_table(G.from_ref(a.group))
    buf = io.StringIO()
    dump_table(tab, buf)
    return buf.getvalue().splitlines()


def cmd_class_analyze(a, cfg: Config) -> list[str]:
    tab = G.character_table(G.from_ref(a.group))
    t = _class_function(a.t, tab)
    xi = [int(x) for x in a.xi.split(",")] if a.xi else None
    s, cls = G.s_t_with_class(t, xi)
    out = [_kv("group", tab.group.ref), _kv("S_t", s), _kv("S_t_class", tab.group.class_labels[cls])]
    for j, k in ((1, 1), (1, 2), (1, 4), (0, 2)):
        out.append(_kv(f"lambda_{j}{k}", G.lambda_norm(t, j, k, xi)))
    for i, lab in enumerate(tab.labels):
        out.append(_kv(f"t_hat[{lab}]", complex(t.fourier[i])))
    return out


def cmd_conductor(a, cfg: Config) -> list[str]:
    if a.ext:
        data = builtin_conductors(a.ext)
    else:
        if not (a.filtration and a.table):
            raise InputError("give --ext or both --filtration and --table")
        with open(a.table) as fh:
            tab = load_table(fh)
        with open(a.filtration) as fh:
            filts = load_filtrations(fh)
        for f in filts:
            f.validate(tab.group)
        data = conductor_data(tab, filts, base_degree=a.base_degree, log_dK=a.log_dK)
    out = [_kv("group", data.table.group.ref)]
    if data.log_rd_L is not None:
        out.append(_kv("log_rd_L", data.log_rd_L))
    for f in data.filtrations:
        out.append(_kv(f"disc_exponent[{f.label}]", data.exponent_sum(f.label)))
    for i, lab in enumerate(data.table.labels):
        ex = " ".join(f"{k}={v}" for k, v in sorted(data.exponents[i].items()))
        out.append(f"chi {lab}: {ex} log_A={data.log_A[i]!r}")
        if data.log_rd_L is not None:
            b = pointwise_bounds(data.table.degrees[i], data.log_rd_L, data.base_degree, data.log_A[i])
            inside = data.log_A[i] <= b.upper + 1e-12 and (i == 0 or data.log_A[i] >= b.lower - 1e-12)
            out.append(f"  bounds: lower={b.lower!r} upper={b.upper!r} inside={inside}")
    return out


def cmd_zeros_find(a, cfg: Config) -> list[str]:
    zs = find_dirichlet_zeros(a.q, a.index, a.tmax, a.step)
    buf = io.StringIO()
    dump_zeros(zs, buf)
    if a.write:
        Path(a.write).write_text(buf.getvalue())
    disc = certify(zs, dirichlet_character(a.q, a.index).primitive())
    out = [_kv("label", zs.label), _kv("count", int(zs.mults.sum() + zs.conj_mults.sum())),
           _kv("first", float(zs.ordinates[0]) if zs.ordinates.size else "none"),
           _kv("count_discrepancy", disc)]
    return out if a.write else out + buf.getvalue().splitlines()


def cmd_zeros_import(a, cfg: Config) -> list[str]:
    try:
        with open(a.file) as fh:
            zs = ingest_zeros(fh)
    except OSError as exc:
        raise InputError(str(exc)) from None
    out = [_kv("label", zs.label), _kv("ordinates", int(zs.ordinates.size)),
           _kv("conj_ordinates", int(zs.conj_ordinates.size)), _kv("height", zs.height_max),
           _kv("self_dual", int(zs.self_dual)), _kv("central", zs.central_order)]
    out += [_kv("issue", s) for s in zs.issues]
    if a.q is not None:
        chi = dirichlet_character(a.q, a.index).primitive()
        out.append(_kv("count_discrepancy", certify(zs, chi)))
    return out


def cmd_psi(a, cfg: Config) -> list[str]:
    oracle = builtin_oracle(a.ext)
    t = _class_function(a.t, oracle.table)
    eta = builtin_eta(a.eta, cfg.delta)
    r = psi_eta(a.x, oracle, t, eta, cfg.psi_tol, cfg.sieve_ceiling)
    return [_kv("ext", a.ext), _kv("x", a.x), _kv("psi_eta", r.value), _kv("bar", r.bar),
            _kv("truncation_bar", r.truncation_bar), _kv("ramified_bar", r.ramified_bar),
            _kv("terms", r.n_terms)]


def _variance_data(a, cfg: Config):
    oracle = builtin_oracle(a.ext)
    t = _class_function(a.t, oracle.table)
    eta = builtin_eta(a.eta, cfg.delta)
    sets = _ext_zerosets(a.ext, oracle.table, a.zeros, a.tmax)
    h = eta_to_h(eta)
    nu, bar = variance_nu(t.fourier, sets, h)
    return oracle, t, eta, sets, h, nu, bar


def cmd_variance(a, cfg: Config) -> list[str]:
    oracle, t, eta, sets, h, nu, bar = _variance_data(a, cfg)
    out = [_kv("ext", a.ext), _kv("nu", nu), _kv("nu_bar", bar)]
    if nu > 0:
        out.append(_kv("w4", w4(t.fourier, sets, h)))
    try:
        data = builtin_conductors(a.ext)
    except InputError:
        return out
    s = G.s_t(t)
    lam12 = G.lambda_norm(t, 1, 2)
    centre = eta.alpha * data.log_rd_L * lam12
    out += [_kv("S_t", s), _kv("lambda_12", lam12), _kv("bracket_centre", centre),
            _kv("bracket_lower", (1 - s) * centre), _kv("bracket_upper", (1 + s) * centre),
            _kv("ratio", nu / centre)]
    return out


def cmd_moments(a, cfg: Config) -> list[str]:
    oracle = builtin_oracle(a.ext)
    t = _class_function(a.t, oracle.table)
    eta = builtin_eta(a.eta, cfg.delta)
    phi = builtin_phi(a.phi)
    em = EmpiricalMoments(oracle, t, eta, phi, a.U, a.z, cfg.quad_tol, cfg.sieve_ceiling)
    r = em.moment(a.n)
    out = [_kv("ext", a.ext), _kv("U", a.U), _kv("n", a.n), _kv("z", a.z), _kv("Mtilde", r.value),
           _kv("Mtilde_bar", r.bar), _kv("quad_error", r.quad_error), _kv("psi_error", r.psi_error)]
    if a.dtilde:
        sets = _ext_zerosets(a.ext, oracle.table, a.zeros, a.tmax)
        d = dtilde_truncated(sets, t.fourier, eta, phi, a.U, a.n, min(a.tmax, 60.0))
        out += [_kv("Dtilde", d.value), _kv("Dtilde_bar", d.bar), _kv("gap", abs(r.value - d.value))]
    if a.tsv:
        u = np.linspace(0.0, em.u_max, 401)
        res = em.residual(u)
        lines = ["u\tresidual"] + [f"{x!r}\t{y!r}" for x, y in zip(u.tolist(), res.tolist())]
        Path(a.tsv).write_text("\n".join(lines) + "\n")
    return out


def cmd_verify_s2l(a, cfg: Config) -> list[str]:
    checks = s2l(a.trials, a.seed)
    out = [c.line() for c in checks]
    if not all(c.passed for c in checks):
        raise _ReportFailure(out)
    return out


def cmd_omega_report(a, cfg: Config) -> list[str]:
    data = builtin_conductors(a.ext)
    tab = data.table
    t = _class_function(a.t, tab)
    s = G.s_t(t)
    lam11, lam12 = G.lambda_norm(t, 1, 1), G.lambda_norm(t, 1, 2)
    rep = omega_report(data.log_rd_L, data.base_degree, lam11, lam12, s, a.slack, cfg.kappa_prime)
    out = [_kv("ext", a.ext), _kv("log_rd_L", data.log_rd_L), _kv("S_t", s), _kv("lambda_11", lam11),
           _kv("lambda_12", lam12), _kv("lower_over_sqrt_x", rep.lower), _kv("vacuous", rep.vacuous),
           _kv("beta" if rep.beta_has_kappa else "beta_over_kappa_prime", rep.beta),
           _kv("constants", cfg.constants_line())]
    if a.nu is not None:
        alpha = builtin_eta(a.eta, cfg.delta).alpha
        tb = gaussian_lower_bound(a.m, a.nu, a.w4, lam11, data.log_rd_L, data.base_degree, a.U,
                                lam12, alpha, s, cfg.kappa_eta)
        out += [_kv("main", tb.main), _kv("correction_magnitude", tb.correction),
                _kv("plumbing" if tb.plumbing_has_kappa else "plumbing_over_kappa_eta_2m", tb.plumbing),
                _kv("nu_lower", tb.nu_lower), _kv("nu_upper", tb.nu_upper),
                _kv("slack_scale", tb.slack_scale)]
    return out


def cmd_reproduce(a, cfg: Config) -> list[str]:
    checks = SUITES[a.suite]()
    out = [c.line() for c in checks]
    if not all(c.passed for c in checks):
        raise _ReportFailure(out)
    return out


class _ReportFailure(NumericError):
    def __init__(self, lines):
        super().__init__("one or more checks failed")
        self.lines = lines


# -- parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chebmoments", description=__doc__)
    p.add_argument("--config", help="INI configuration file")
    p.add_argument("--out", help="also write the report to this file")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("group-table", help="character table of a built-in group")
    s.add_argument("group", help="e.g. dihedral:5, affine:7, symmetric:5, units:8")
    s.set_defaults(func=cmd_group_table)

    s = sub.add_parser("class-analyze", help="S_t, lambda norms and Fourier coefficients")
    s.add_argument("group")
    s.add_argument("--t", required=True, help="class function file or expression")
    s.add_argument("--xi", help="comma-separated character indices")
    s.set_defaults(func=cmd_class_analyze)

    s = sub.add_parser("conductor", help="Artin conductors from ramification filtrations")
    s.add_argument("--ext")
    s.add_argument("--filtration")
    s.add_argument("--table")
    s.add_argument("--base-degree", type=int, default=1)
    s.add_argument("--log-dK", type=float, default=0.0)
    s.set_defaults(func=cmd_conductor)

    s = sub.add_parser("zeros-find", help="certified zeros of a Dirichlet L-function")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--index", type=int, required=True)
    s.add_argument("--tmax", type=float, required=True)
    s.add_argument("--step", type=float, default=0.05)
    s.add_argument("--write", help="zero file to write")
    s.set_defaults(func=cmd_zeros_find)

    s = sub.add_parser("zeros-import", help="read and check a zero file")
    s.add_argument("file")
    s.add_argument("--q", type=int)
    s.add_argument("--index", type=int, default=0)
    s.set_defaults(func=cmd_zeros_import)

    def ext_args(s, t_required=True):
        s.add_argument("--ext", required=True)
        s.add_argument("--t", required=t_required)
        s.add_argument("--eta", default="gaussian")

    s = sub.add_parser("psi", help="weighted prime sum psi_eta(x)")
    ext_args(s)
    s.add_argument("--x", type=float, required=True)
    s.set_defaults(func=cmd_psi)

    s = sub.add_parser("variance", help="nu and w4 from zeros")
    ext_args(s)
    s.add_argument("--tmax", type=float, default=60.0)
    s.add_argument("--zeros", action="append", help="index=file, repeatable")
    s.set_defaults(func=cmd_variance)

    s = sub.add_parser("moments", help="empirical moment M~_n and optionally D~_n")
    ext_args(s)
    s.add_argument("--phi", default="triangle")
    s.add_argument("--U", type=float, required=True)
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--z", type=float, default=0.0)
    s.add_argument("--dtilde", action="store_true")
    s.add_argument("--tmax", type=float, default=60.0)
    s.add_argument("--zeros", action="append")
    s.add_argument("--tsv", help="write u and the residual to a tab-separated file")
    s.set_defaults(func=cmd_moments)

    s = sub.add_parser("verify-s2l", help="random checks of the combinatorial lower bound")
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--seed", type=int, default=42)
    s.set_defaults(func=cmd_verify_s2l)

    s = sub.add_parser("omega-report", help="oscillation lower bound and window exponent")
    ext_args(s)
    s.add_argument("--slack", type=float, default=0.0)
    s.add_argument("--nu", type=float)
    s.add_argument("--w4", type=float, default=0.0)
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--U", type=float, default=10.0)
    s.set_defaults(func=cmd_omega_report)

    s = sub.add_parser("reproduce", help="run a named verification suite")
    s.add_argument("suite", choices=sorted(SUITES))
    s.set_defaults(func=cmd_reproduce)
    return p


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    lines: list[str] = []
    code = 0
    try:
        cfg = load_config(a.config)
        lines = a.func(a, cfg)
    except _ReportFailure as exc:
        lines, code = exc.lines, exc.exit_code
    except ChebMomentsError as exc:
        print(f"error: {exc}", file=stderr)
        return exc.exit_code
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=stderr)
        return InputError.exit_code
    text = "\n".join(lines) + "\n"
    stdout.write(text)
    if a.out:
        Path(a.out).write_text(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
