import io

import pytest

from chebmoments.cli import run
from chebmoments.config import Config, load_config
from chebmoments.errors import InputError


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def kv(text):
    return dict(line.split(": ", 1) for line in text.splitlines() if ": " in line)


# -- configuration -------------------------------------------------------------------------

def test_config_defaults():
    c = load_config(env={})
    assert c == Config()
    assert "kappa_eta=unset" in c.constants_line()


def test_config_file_and_env(tmp_path):
    p = tmp_path / "run.ini"
    p.write_text("[sieve]\nceiling = 5e7\n[constants]\nkappa_eta = 2.5\n[run]\nthreads = 3\n")
    c = load_config(p, env={"CHEBM_SIEVE_CEILING": "2e7"})
    assert c.sieve_ceiling == 2 * 10**7
    assert c.kappa_eta == 2.5 and c.threads == 3
    assert "kappa_eta=2.5" in c.constants_line()


@pytest.mark.parametrize("env", [{"CHEBM_SIEVE_CEILING": "2e9"}, {"CHEBM_QUADRATURE_TOL": "0"},
                                 {"CHEBM_QUADRATURE_TOL": "abc"}, {"CHEBM_RUN_THREADS": "0"}])
def test_config_rejects(env):
    with pytest.raises(InputError):
        load_config(env=env)


def test_config_missing_file(tmp_path):
    with pytest.raises(InputError):
        load_config(tmp_path / "nope.ini", env={})


# -- commands ----------------------------------------------------------------------------------

def test_group_table_dihedral5():
    code, out, _ = call("group-table", "dihedral:5")
    assert code == 0
    classes = [l for l in out.splitlines() if l.startswith("class ")]
    degrees = [int(l.split()[2]) for l in out.splitlines() if l.startswith("chi ")]
    assert len(classes) == 4 and degrees == [1, 1, 2, 2]


def test_class_analyze_dihedral3():
    code, out, _ = call("class-analyze", "dihedral:3", "--t", "delta_e_scaled")
    assert code == 0
    assert float(kv(out)["S_t"]) == pytest.approx(0.2, abs=1e-12)


def test_class_analyze_character_expression():
    code, out, _ = call("class-analyze", "affine:5", "--t", "chi:theta")
    assert code == 0
    assert float(kv(out)["S_t"]) == pytest.approx(0.25)


def test_verify_s2l():
    code, out, _ = call("verify-s2l", "--trials", "10", "--seed", "1")
    assert code == 0
    assert "10/10 hold" in out


def test_conductor():
    code, out, _ = call("conductor", "--ext", "kummer:2,3")
    assert code == 0
    d = kv(out)
    assert d["disc_exponent[3]"] == "7" and d["disc_exponent[2]"] == "4"
    assert "inside=False" not in out


def test_conductor_from_files(tmp_path):
    from chebmoments.conductors import dump_filtrations, kummer_filtrations
    from chebmoments.groups import character_table
    from chebmoments.groups.textio import dump_table

    g, filts = kummer_filtrations(2, 3)
    tf, ff = tmp_path / "table.txt", tmp_path / "filt.txt"
    with open(tf, "w") as fh:
        dump_table(character_table(g), fh)
    with open(ff, "w") as fh:
        dump_filtrations(filts, fh)
    code, out, _ = call("conductor", "--table", str(tf), "--filtration", str(ff))
    assert code == 0
    want = call("conductor", "--ext", "kummer:2,3")[1]
    assert out.splitlines()[1:] == want.splitlines()[1:]


def test_zeros_round_trip(tmp_path):
    p = tmp_path / "z.txt"
    code, out, _ = call("zeros-find", "--q", "1", "--index", "0", "--tmax", "50", "--write", str(p))
    assert code == 0 and kv(out)["count"] == "10"
    code, out, _ = call("zeros-import", str(p), "--q", "1")
    assert code == 0 and kv(out)["ordinates"] == "10"
    assert float(kv(out)["count_discrepancy"]) <= 1


def test_psi_and_out_file(tmp_path):
    p = tmp_path / "report.txt"
    code, out, _ = call("--out", str(p), "psi", "--ext", "cyclotomic:5", "--t", "5*ind:1-one", "--x", "1e3")
    assert code == 0 and p.read_text() == out
    assert float(kv(out)["ramified_bar"]) == 0.0


def test_variance_and_moments():
    code, out, _ = call("variance", "--ext", "cyclotomic:5", "--t", "5*ind:1-one", "--tmax", "40")
    d = kv(out)
    assert code == 0 and float(d["nu"]) > 0
    assert float(d["lambda_12"]) == pytest.approx(4.75)
    code, out, _ = call("moments", "--ext", "cyclotomic:4", "--t", "2*ind:1-one", "--U", "5", "--n", "2",
                        "--dtilde", "--tmax", "30")
    d = kv(out)
    assert code == 0 and float(d["Mtilde"]) >= 0 and "Dtilde" in d


def test_omega_report():
    code, out, _ = call("omega-report", "--ext", "cyclotomic:5", "--t", "5*ind:1-one", "--nu", "1e-6")
    d = kv(out)
    assert code == 0 and d["vacuous"] == "False"
    assert "beta_over_kappa_prime" in d and "plumbing_over_kappa_eta_2m" in d


def test_reproduce_exit_codes():
    assert call("reproduce", "prop21")[0] == 0
    code, out, _ = call("reproduce", "prop23")
    assert code == 3 and "FAIL" in out


def test_deterministic(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    args = ["moments", "--ext", "cyclotomic:4", "--t", "2*ind:1-one", "--U", "5", "--n", "2"]
    assert call("--out", str(a), *args)[0] == 0
    assert call("--out", str(b), *args)[0] == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("argv, code", [
    (["nosuch"], 2),
    (["group-table"], 2),
    (["group-table", "dihedral:4"], 2),
    (["class-analyze", "dihedral:3", "--t", "bogus"], 2),
    (["psi", "--ext", "cyclotomic:6", "--t", "one", "--x", "10"], 2),
    (["conductor"], 2),
])
def test_usage_errors(argv, code):
    got, _, err = call(*argv)
    assert got == code


def test_data_format_error(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("not a zero file\n")
    code, _, err = call("zeros-import", str(p))
    assert code == 4 and "error" in err


def test_config_errors_exit(tmp_path):
    p = tmp_path / "c.ini"
    p.write_text("[sieve]\nceiling = 5e9\n")
    assert call("--config", str(p), "group-table", "dihedral:3")[0] == 2


def test_class_analyze_from_file(tmp_path):
    from chebmoments import groups as G
    from chebmoments.groups.textio import dump_class_function

    tab = G.character_table(G.dihedral(3))
    p = tmp_path / "t.txt"
    with open(p, "w") as fh:
        dump_class_function(G.delta_identity(tab, scaled=True), fh)
    code, out, _ = call("class-analyze", "dihedral:3", "--t", str(p))
    assert code == 0
    assert out == call("class-analyze", "dihedral:3", "--t", "delta_e_scaled")[1]
