import json

import pytest

from siegel_hecke.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_reduce_and_alpha(capsys):
    code, out, _ = run(capsys, "reduce", "5", "14", "10")
    assert code == 0 and out.splitlines()[0] == "1 0 1"
    code, out, _ = run(capsys, "alpha", "1", "0", "1", "--p", "5")
    assert code == 0 and out.strip() == "2"


@pytest.mark.parametrize("argv", [
    ["reduce", "1", "0"],
    ["alpha", "1", "0", "1"],
    ["nonsense"],
    ["--threads", "0", "alpha", "1", "0", "1", "--p", "3"],
    ["eta-kappa", "--p", "3", "--R", "1", "--k", "4", "--lam", "280", "--chi", "bogus"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and json.loads(err)["exit"] == 2


def test_theta_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "theta", "--builtin", "e8", "--bound", "3", "--out", str(a))[0] == 0
    assert run(capsys, "--threads", "1", "theta", "--builtin", "e8", "--bound", "3", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_and_eigen_exit_codes(tmp_path, capsys):
    f = tmp_path / "e8.json"
    run(capsys, "theta", "--builtin", "e8", "--bound", "6", "--out", str(f))
    code, out, _ = run(capsys, "eigen", "--in", str(f), "--op", "tp", "--p", "2")
    assert code == 0 and json.loads(out)["status"] == "PASS"
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--identity", "thm11a", "--in", str(f), "--p", "2", "--report", str(report))
    assert code == 0 and json.loads(out)["passed"] and json.loads(report.read_text()) == json.loads(out)
    # needs T(5) on classes beyond B = 6
    code, _, err = run(capsys, "verify", "--identity", "thm11b", "--in", str(f), "--p", "5", "--r", "1")
    assert code == 3 and json.loads(err)["exit"] == 3
    code, _, err = run(capsys, "verify", "--identity", "thm11b", "--in", str(f), "--p", "2")
    assert code == 2


def test_verify_failure_exit_1(tmp_path, capsys):
    f = tmp_path / "e8.json"
    run(capsys, "theta", "--builtin", "e8", "--bound", "6", "--out", str(f))
    data = json.loads(f.read_text())
    for row in data["coeffs"]:
        if row[:3] == [3, 0, 3]:
            row[3] = str(int(row[3]) + 1)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", "--identity", "thm11a", "--in", str(bad), "--p", "3")
    assert code in (1, 3)
    code, out, _ = run(capsys, "verify", "--identity", "thm11c", "--in", str(bad), "--n", "3", "--m", "2")
    assert code == 3  # the T(3) extraction reads a(3I)


def test_cache_dir_is_used(tmp_path, capsys):
    cache = tmp_path / "cache"
    out1, out2 = tmp_path / "1.json", tmp_path / "2.json"
    run(capsys, "--cache-dir", str(cache), "igusa-chi10", "--bound", "4", "--out", str(out1))
    entries = list(cache.iterdir())
    assert len(entries) == 1
    run(capsys, "--cache-dir", str(cache), "igusa-chi10", "--bound", "4", "--out", str(out2))
    assert out1.read_bytes() == out2.read_bytes() and list(cache.iterdir()) == entries


def test_eta_kappa_and_sublattices(tmp_path, capsys):
    code, out, _ = run(capsys, "eta-kappa", "--p", "2", "--R", "2", "--k", "4", "--lam", "45", "--lam1", "111")
    data = json.loads(out)
    assert code == 0 and data["kappa"][1] == "41"
    code, out, _ = run(capsys, "sublattices", "1", "0", "1", "--p", "3")
    assert code == 0 and len(json.loads(out)["children"]) == 4
