import csv
import io
import json
import subprocess
import sys

import pytest

from qdirac import cli
from qdirac.config import RunConfig, load
from qdirac.errors import ConfigError


def run(args, capsys):
    code = cli.main(args)
    out, err = capsys.readouterr()
    return code, out, err


# -- config ------------------------------------------------------------------------------

def test_defaults():
    cfg = RunConfig()
    assert (cfg.q, cfg.twist, cfg.alpha, cfg.K, cfg.M, cfg.seed) == (0.5, 1, 2.0, 16, 4, 0)
    assert cfg.gamma_q == pytest.approx(1 / 3)
    assert RunConfig(twist=2).alpha == 1.0


def test_flags_override_file(tmp_path):
    f = tmp_path / "run.json"
    f.write_text(json.dumps({"q": 0.3, "K": 20, "M": 2}))
    cfg = load(str(f), K=8)
    assert (cfg.q, cfg.K, cfg.M) == (0.3, 8, 2)


@pytest.mark.parametrize("data", [{"q": 1.5}, {"twist": 3}, {"K": 0}, {"K": 2.5}, {"bogus": 1}, [1, 2]])
def test_schema_violations(tmp_path, data):
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(data))
    with pytest.raises(ConfigError):
        load(str(f))


def test_unreadable_config(tmp_path):
    with pytest.raises(ConfigError):
        load(str(tmp_path / "missing.json"))
    f = tmp_path / "broken.json"
    f.write_text("{")
    with pytest.raises(ConfigError):
        load(str(f))


# -- verify ------------------------------------------------------------------------------

def test_verify_algebra_passes(capsys):
    code, out, _ = run(["verify", "--suite", "algebra", "--K", "32", "--M", "4"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["suite"] == "algebra" and rep["K"] == 32
    assert all(set(ch) == {"name", "max_residual", "threshold", "pass"} for ch in rep["checks"])
    assert all(ch["pass"] for ch in rep["checks"])


def test_pairing_error_exits_2(capsys):
    code, out, err = run(["verify", "--suite", "dirac", "--twist", "1", "--alpha", "1"], capsys)
    assert code == 2 and out == ""
    assert "alpha" in err


def test_bad_config_file_exits_2(tmp_path, capsys):
    f = tmp_path / "c.json"
    f.write_text('{"q": 2}')
    code, _, _ = run(["verify", "--suite", "algebra", "--config", str(f)], capsys)
    assert code == 2


def test_failed_check_exits_1(capsys, monkeypatch):
    from qdirac import suites

    monkeypatch.setattr(suites, "run", lambda *a, **k: {"suite": "x", "q": 0.5, "alpha": 2.0, "K": 4, "M": 1,
                                                          "checks": [suites.check("forced", 1.0)]})
    code, out, _ = run(["verify"], capsys)
    assert code == 1
    assert json.loads(out)["checks"][0]["pass"] is False


def test_adjoint_report_is_byte_stable(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", "--suite", "adjoints", "--K", "10", "--M", "2", "--npairs", "100", "--seed", "7"]
    assert run(args + ["--out", str(a)], capsys)[0] == 0
    assert run(args + ["--out", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_csv(capsys):
    code, out, _ = run(["verify", "--suite", "algebra", "--K", "16", "--M", "2", "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert list(rows[0]) == ["name", "max_residual", "threshold", "pass"]
    assert {r["pass"] for r in rows} == {"true"}


# -- spectrum ----------------------------------------------------------------------------

def test_spectrum_csv_columns_and_delta(capsys):
    code, out, _ = run(["spectrum", "--K", "6", "--M", "1", "--grade", "0", "--delta-step", "2", "--format", "csv"],
                       capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert list(rows[0]) == ["grade", "index", "eigenvalue", "delta_K"]
    assert all(r["delta_K"] != "" for r in rows)


def test_spectrum_json_mirrors_csv(capsys):
    args = ["spectrum", "--K", "6", "--M", "1", "--grade", "0", "--no-delta"]
    _, js, _ = run(args, capsys)
    _, cs, _ = run(args + ["--format", "csv"], capsys)
    rows = json.loads(js)["rows"]
    crow = list(csv.DictReader(io.StringIO(cs)))
    assert [float(r["eigenvalue"]) for r in crow] == [r["eigenvalue"] for r in rows]


def test_spectrum_without_coupling(capsys):
    code, out, _ = run(["spectrum", "--c", "0", "--K", "6", "--M", "1", "--grade", "0", "--no-delta"], capsys)
    assert code == 0
    assert len(json.loads(out)["rows"]) == json.loads(out)["block_sizes"]["0"]


def test_spectrum_cap_exits_3(capsys):
    code, _, err = run(["spectrum", "--K", "8", "--M", "2", "--size-cap", "10"], capsys)
    assert code == 3
    assert "cap" in err


# -- commutator and symbol ------------------------------------------------------------

def test_commutator_of_a(capsys):
    code, out, _ = run(["commutator", "--phi", "a", "--sweep", "8,12", "--M", "2"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert [r["K"] for r in rep["rows"]] == [8, 12]
    assert all(r["oracle_residual"] <= 1e-10 for r in rep["rows"])
    assert rep["phi"] == "a"
    assert set(rep["growth"]) == {"two_sided", "collapsed"}


def test_commutator_of_one_is_zero(capsys):
    code, out, _ = run(["commutator", "--phi", "one", "--sweep", "6,8", "--M", "1"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert all(r["norm_two_sided"] == 0 and r["norm_collapsed"] == 0 for r in rep["rows"])


def test_commutator_reading_filter(capsys):
    code, out, _ = run(["commutator", "--phi", "a*", "--K", "8", "--M", "1", "--reading", "collapsed",
                        "--format", "csv"], capsys)
    header = out.splitlines()[0].split(",")
    assert code == 0
    assert "norm_collapsed" in header and "norm_two_sided" not in header


def test_domain_error_exits_4(capsys):
    code, _, err = run(["commutator", "--phi", "c", "--twist", "2", "--K", "8", "--M", "1"], capsys)
    assert code == 4
    assert "d_z" in err


def test_parse_error_exits_2(capsys):
    code, _, err = run(["commutator", "--phi", "("], capsys)
    assert code == 2
    assert "byte 1" in err


def test_symbol(capsys):
    code, out, _ = run(["symbol", "--phi", "z + 2 s*", "--K", "8"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["coefficients"] == [{"circle_mode": 0, "degree": -1, "symbol_mode": -1, "re": 3.0, "im": 0.0}]


def test_symbol_of_unbounded_exits_4(capsys):
    assert run(["symbol", "--phi", "yinv"], capsys)[0] == 4


def test_thread_cap_validation(capsys, monkeypatch):
    monkeypatch.setenv("QDIRAC_THREADS", "zero")
    assert run(["symbol", "--phi", "a"], capsys)[0] == 2
    monkeypatch.setenv("QDIRAC_THREADS", "1")
    assert run(["symbol", "--phi", "a"], capsys)[0] == 0


def test_non_finite_values_are_strings():
    assert cli.plain({"x": float("inf"), "y": float("nan"), "z": 1 + 2j}) == \
        {"x": "inf", "y": "nan", "z": {"re": 1.0, "im": 2.0}}
    assert "Infinity" not in cli.to_json({"d": float("-inf")})


def test_console_script_entry():
    out = subprocess.run([sys.executable, "-m", "qdirac.cli", "symbol", "--phi", "s", "--K", "4"],
                         capture_output=True, text=True, check=False)
    assert out.returncode == 0
    assert json.loads(out.stdout)["phi"] == "s"
