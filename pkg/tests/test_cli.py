import json
import subprocess
import sys

import pytest

from fqpoints.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def value_of(out):
    return dict(line.split(None, 1) for line in out.splitlines())["value"]


def test_bound_examples(capsys):
    assert value_of(run(capsys, "bound", "tb", "--d", "2", "--m", "3", "--r", "5", "--q", "2")[1]) == "6"
    assert value_of(run(capsys, "bound", "zanella", "--m", "3", "--r", "5", "--q", "2")[1]) == "5"
    assert value_of(run(capsys, "bound", "serre", "--d", "1", "--m", "4", "--q", "3")[1]) == "40"
    code, out, _ = run(capsys, "bound", "zanella", "--m", "3", "--r", "5", "--p", "2", "--format", "json")
    assert code == 0 and json.loads(out)["value"] == 5


@pytest.mark.parametrize("argv,value", [
    (["schwarz_zippel", "--d", "2", "--m", "2", "--q", "3"], 6),
    (["couvreur", "--m", "3", "--q", "2", "--components", "2:1,1:1"], 10),
    (["couvreur_equidim", "--m", "3", "--q", "2", "--n", "1", "--deg", "4"], 12),
    (["homma", "--a", "4", "--m", "3", "--q", "3"], 10),
    (["zanella_set", "--a", "3", "--q", "2"], 7),
    (["tb_lower", "--d", "2", "--m", "3", "--r", "2", "--q", "2"], 9),
])
def test_bound_variants(capsys, argv, value):
    code, out, _ = run(capsys, "bound", *argv, "--format", "json")
    assert code == 0 and json.loads(out)["value"] == value


def test_bound_ci(capsys):
    code, out, _ = run(capsys, "bound", "ci", "--d", "2", "--m", "3", "--r", "2", "--q", "3",
                       "--format", "json")
    d = json.loads(out)
    assert (d["T"]["value"], d["C"]["value"], d["relation"]) == (16, 16, "C=T")


@pytest.mark.parametrize("argv,needle", [
    (["bound", "tb", "--m", "3", "--r", "1", "--q", "2"], "--d"),
    (["bound", "tb", "--d", "2", "--m", "3", "--r", "5", "--q", "6"], "--q"),
    (["bound", "serre", "--d", "0", "--m", "3", "--q", "2"], "--d"),
    (["bound", "serre", "--d", "1", "--m", "3", "--q", "4", "--p", "2"], "--q"),
    (["bound", "couvreur", "--m", "3", "--q", "2", "--components", "2-1"], "--components"),
    (["census", "--m", "1", "--q", "2"], "--m"),
    (["search", "--d", "2", "--m", "2", "--q", "2"], "--r"),
    (["prm", "closed-forms", "--d", "2", "--m", "2", "--q", "2"], "q"),
])
def test_validation_errors_exit_2(capsys, argv, needle):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert needle in err


def test_count_examples(capsys, tmp_path):
    f = tmp_path / "fam.txt"
    f.write_text("# two quadrics\nx0*x1\n\nx0*x2  # second\n")
    code, out, _ = run(capsys, "count", str(f), "--m", "3", "--q", "2", "--format", "json")
    assert code == 0 and json.loads(out)["count"] == 9
    g = tmp_path / "lin.txt"
    g.write_text("x0\n")
    code, out, _ = run(capsys, "count", str(g), "--m", "2", "--q", "3", "--format", "json")
    assert json.loads(out)["count"] == 4
    e = tmp_path / "empty.txt"
    e.write_text("# nothing\n")
    code, out, err = run(capsys, "count", str(e), "--q", "2")
    assert code == 2 and "no polynomials" in err


def test_count_parse_error_position(capsys, tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("x0*x1\nx0^2 + x1\n")
    code, _, err = run(capsys, "count", str(f), "--q", "2")
    assert code == 2 and "line 2" in err and "not homogeneous" in err
    f.write_text("x0*x1\nx0*x1 + foo*x2\n")
    code, _, err = run(capsys, "count", str(f), "--q", "2")
    assert code == 2 and "line 2, column 9" in err


def test_search_examples(capsys):
    code, out, _ = run(capsys, "search", "--d", "2", "--m", "2", "--r", "1", "--q", "2",
                       "--mode", "exhaustive", "--format", "json")
    assert json.loads(out)["count"] == 5
    code, out, _ = run(capsys, "search", "--d", "2", "--m", "3", "--r", "5", "--q", "2",
                       "--mode", "randomized", "--budget", "10000", "--format", "json")
    d = json.loads(out)
    assert 4 <= d["count"] <= 5 and d["seed"] == 20150601
    code, out, _ = run(capsys, "search", "--d", "1", "--m", "3", "--r", "2", "--q", "3", "--format", "json")
    assert json.loads(out)["count"] == 4


def test_census_examples(capsys):
    code, out, _ = run(capsys, "census", "--m", "3", "--q", "2")
    assert code == 0 and out.splitlines()[-1].startswith("1 failing rows")
    code, out, _ = run(capsys, "census", "--m", "2", "--q", "5", "--format", "csv")
    lines = out.splitlines()
    assert lines[0] == "r,k,i,T_r,Z_r,gap" and lines[-1].startswith("# 0 failing rows")
    code, out, _ = run(capsys, "census", "--m", "5", "--q", "2", "--format", "json")
    d = json.loads(out)
    assert d["failing"] >= d["expected_min"] == 6


def test_prm_examples(capsys):
    code, out, _ = run(capsys, "prm", "weights", "--d", "2", "--m", "2", "--q", "3")
    assert out.strip() == "6 8 9 11 12 13"
    code, out, _ = run(capsys, "prm", "matrix", "--d", "1", "--m", "2", "--q", "2")
    rows = out.splitlines()
    assert len(rows) == 3 and all(len(r.split()) == 7 for r in rows)
    code, out, _ = run(capsys, "prm", "weights", "--d", "2", "--m", "2", "--q", "2", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["method"] == "subspace_search" and len(d["weights"]) == 6
    code, _, err = run(capsys, "prm", "closed-forms", "--d", "2", "--m", "2", "--q", "2")
    assert code == 2 and "HypothesisViolated" in err
    code, out, _ = run(capsys, "prm", "closed-forms", "--d", "2", "--m", "2", "--q", "3", "--format", "csv")
    assert out.splitlines()[1] == "1,6"
    code, out, _ = run(capsys, "prm", "plotkin", "--d", "1", "--m", "2", "--q", "2", "--format", "json")
    assert json.loads(out)["plotkin_rhs"] == "4"
    code, out, _ = run(capsys, "prm", "geometric", "--d", "2", "--m", "2", "--q", "3")
    assert out.strip() == "6 8 9 11 12 13"


@pytest.mark.parametrize("argv", [
    ["search", "--d", "2", "--m", "3", "--r", "5", "--q", "2", "--mode", "randomized",
     "--budget", "500", "--seed", "11", "--format", "json"],
    ["census", "--m", "4", "--q", "3", "--format", "csv"],
    ["prm", "weights", "--d", "1", "--m", "2", "--q", "3", "--format", "json"],
])
def test_byte_identical_reruns(capsys, argv):
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == first


def test_out_file(capsys, tmp_path):
    target = tmp_path / "census.csv"
    code, out, _ = run(capsys, "census", "--m", "3", "--q", "2", "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("r,k,i")


def test_verify_reports_failures_with_exit_1(capsys, monkeypatch):
    from fqpoints import verify

    monkeypatch.setattr(verify, "FAST", [("always_ok", lambda seed: []),
                                         ("broken", lambda seed: [("case", 1, 2)])])
    code, out, err = run(capsys, "verify", "fast")
    assert code == 1
    assert "PASS always_ok" in out and "FAIL broken" in out
    assert "case: expected 1, observed 2" in out
    assert "always_ok:" in err  # timing goes to stderr


def test_verify_fast_seed_independent(capsys):
    a = run(capsys, "verify", "fast")
    b = run(capsys, "verify", "fast", "--seed", "7")
    status = lambda out: [l.split()[0:2] for l in out.splitlines() if l.startswith(("PASS", "FAIL"))]
    assert status(a[1]) == status(b[1])
    assert a[0] == b[0]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fqpoints", "bound", "serre", "--d", "2",
                           "--m", "2", "--q", "2", "--format", "json"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["value"] == 5
