import csv
import io
import json
import subprocess
import sys

import pytest

from uehling.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_tabulate_parity(capsys):
    code, out, _ = run(capsys, "tabulate", "--routes", "integral,closed-reduced", "--grid-log", "1e-3:20:60")
    assert code == 0
    rows = read_csv(out)
    assert len(rows) == 60
    assert list(rows[0])[:4] == ["r", "integral", "closed_reduced", "deriv"]
    assert max(float(r["dev_integral_closed_reduced"]) for r in rows) <= 1e-9


def test_tabulate_zero_charge(capsys):
    code, out, _ = run(capsys, "tabulate", "--q", "0", "--grid-lin", "0.1:2:5")
    assert code == 0
    for row in read_csv(out):
        for col in ("integral", "closed_ki024", "closed_reduced", "paper_constant_coeff", "deriv"):
            assert float(row[col]) == 0.0


def test_tabulate_atomic_exponent_scale(capsys):
    alpha = 7.2973525693e-3
    code, out, _ = run(capsys, "tabulate", "--units", "atomic", "--q", "1", "--grid-lin", "0.001:0.01:4")
    assert code == 0
    rows = read_csv(out)
    for row in rows:
        r = float(row["r"])
        assert float(row["exp_scale"]) == pytest.approx(2 * r / alpha, rel=1e-14)
        assert float(row["energy"]) == pytest.approx(alpha * float(row["integral"]), rel=1e-13)


def test_tabulate_csv_json_duality(capsys, tmp_path):
    args = ["tabulate", "--grid-log", "0.01:10:7"]
    assert main([*args, "--format", "csv", "--out", str(tmp_path / "t.csv")]) == 0
    assert main([*args, "--format", "json", "--out", str(tmp_path / "t.json")]) == 0
    rows = read_csv((tmp_path / "t.csv").read_text())
    doc = json.loads((tmp_path / "t.json").read_text())
    assert doc["columns"] == list(rows[0])
    for crow, jrow in zip(rows, doc["rows"]):
        for col in doc["columns"]:
            assert float(crow[col]) == jrow[col]
    # 15 significant digits in scientific notation
    assert rows[0]["r"] == "1.00000000000000e-02"


def test_tabulate_usage_errors(capsys):
    assert run(capsys, "tabulate", "--grid-log", "0:1:5")[0] == 2
    assert run(capsys, "tabulate", "--grid-lin=-1:1:5")[0] == 2
    assert run(capsys, "tabulate", "--grid-log", "1:2")[0] == 2
    assert run(capsys, "tabulate", "--routes", "bogus")[0] == 2


def test_unwritable_output(capsys, tmp_path):
    code, _, err = run(capsys, "tabulate", "--grid-lin", "1:2:2", "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == 3
    assert err


def test_verify_default(capsys):
    code, out, _ = run(capsys, "verify", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] is True
    names = [c["check_name"] for c in doc["checks"]]
    assert len(names) == len(set(names)) == 12
    for c in doc["checks"]:
        assert set(c) >= {"check_name", "grid", "max_abs", "max_rel", "tolerance", "passed"}


def test_verify_forced_failure(capsys):
    code, out, _ = run(capsys, "verify", "--tol", "1e-30", "--format", "json")
    assert code == 1
    assert json.loads(out)["passed"] is False


def test_verify_csv(capsys):
    code, out, _ = run(capsys, "verify", "--grid-log", "0.1:5:6")
    assert code == 0
    rows = read_csv(out)
    assert {r["kind"] for r in rows} == {"asserted", "diagnostic"}
    assert all(r["passed"] == "" for r in rows if r["kind"] == "diagnostic")


def test_verify_deterministic(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert main(["verify", "--format", "json", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_ode_paper_f(capsys):
    code, out, _ = run(capsys, "ode", "--r0", "0.5", "--r-end", "5", "--steps", "2048")
    assert code == 0
    rows = read_csv(out)
    assert len(rows) == 2049
    scale = max(abs(float(r["reference"])) for r in rows)
    assert max(abs(float(r["deviation"])) for r in rows) <= 1e-8 * scale


def test_ode_bad_steps(capsys):
    assert run(capsys, "ode", "--steps", "0")[0] == 2
    assert run(capsys, "ode", "--r0", "2", "--r-end", "1")[0] == 2


def test_ode_quadrature_source(capsys):
    code, out, _ = run(capsys, "ode", "--ic-source", "quadrature", "--steps", "64", "--format", "json")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert all("deviation" in r and "reference" in r for r in rows)
    assert rows[0]["deviation"] == 0.0


def test_specfun_command(capsys):
    code, out, _ = run(capsys, "specfun", "--function", "ki", "--n", "2", "--grid-lin", "0:1:3")
    assert code == 0
    rows = read_csv(out)
    assert float(rows[0]["value"]) == pytest.approx(1.0, abs=1e-14)
    assert run(capsys, "specfun", "--function", "k0", "--grid-lin", "0:1:3")[0] == 2


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "uehling", "specfun", "--grid-lin", "1:1:1"],
        capture_output=True, text=True, check=True,
    )
    assert out.stdout.splitlines()[1].startswith("1.00000000000000e+00,4.21024438240708e-01")
