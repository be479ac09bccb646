import json
import subprocess
import sys

import pytest

from nslab.catalog import load
from nslab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_verify_quasi_r_n1(capsys):
    code, out = run(capsys, "verify", "--catalog-id", "quasi_r/n=1", "--checks", "skew,lagrangian,quasi_jacobi")
    report = json.loads(out)
    assert code == 0
    assert [c["status"] for c in report["checks"]] == ["pass", "pass", "pass"]


def test_verify_perturbed_yang_fails(capsys, tmp_path):
    r, alpha = load("quasi_r/n=0")
    obj = r.to_json()
    obj["g"] = [[1, 1, 0, 0, "1"]]
    path = tmp_path / "perturbed.json"
    path.write_text(json.dumps(obj))
    code, out = run(capsys, "verify", "--input", str(path), "--checks", "cybe")
    rep = json.loads(out)["checks"][0]
    assert code == 1 and rep["status"] == "fail"
    assert set(rep["counterexample"]) >= {"basis", "exponents", "value"}


def test_malformed_json(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{oops")
    code, _ = run(capsys, "verify", "--input", str(path), "--checks", "skew")
    assert code == 2


def test_unknown_check_and_bad_arguments(capsys):
    assert run(capsys, "verify", "--catalog-id", "quasi_r/n=1", "--checks", "nope")[0] == 2
    assert run(capsys, "verify", "--checks", "skew")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_window_insufficient_suggests_window(capsys):
    code, out = run(capsys, "verify", "--catalog-id", "quasi_r/n=2/alpha0=1", "--precision", "8",
                    "--checks", "lagrangian")
    rep = json.loads(out)["checks"][0]
    assert code == 3 and rep["status"] == "insufficient"
    assert rep["minimal_window"]["precision"] > 8


def test_expand_yang(capsys):
    code, out = run(capsys, "expand", "--catalog-id", "quasi_r/n=0", "--k-max", "3")
    rows = json.loads(out)["coefficients"]
    assert code == 0 and len(rows) == 9
    assert {(r["k"], tuple(map(tuple, r["f"]["laurent"]))) for r in rows} >= {(0, (("e", -1, "1"),)), (2, (("f", -3, "1"),))}


def test_expand_beyond_window(capsys):
    code, _ = run(capsys, "expand", "--catalog-id", "quasi_r/n=2/alpha0=1", "--k-max", "40")
    assert code == 3


def test_expand_with_bar(capsys):
    code, out = run(capsys, "expand", "--catalog-id", "generalized/r1/n=2/alpha0=0", "--k-max", "2", "--bar")
    assert code == 0 and "bar_coefficients" in json.loads(out)


def test_twist_zero_is_identity(capsys, tmp_path):
    twist = tmp_path / "zero.json"
    twist.write_text(json.dumps({"g": []}))
    dest = tmp_path / "out.json"
    code, _ = run(capsys, "twist", "--catalog-id", "quasi_r/n=1", "--twist", str(twist), "--output", str(dest))
    written = json.loads(dest.read_text())
    written.pop("alpha")
    assert code == 0 and written == load("quasi_r/n=1")[0].to_json()


def test_twist_skew_and_symmetric(capsys, tmp_path):
    skew = tmp_path / "skew.json"
    skew.write_text(json.dumps({"g": [[0, 2, 1, 0, "1"], [2, 0, 0, 1, "-1"]]}))
    sym = tmp_path / "sym.json"
    sym.write_text(json.dumps({"g": [[0, 2, 1, 0, "1"], [2, 0, 0, 1, "1"]]}))
    code, out = run(capsys, "twist", "--catalog-id", "quasi_r/n=0", "--twist", str(skew))
    assert code == 0 and json.loads(out)["checks"][0]["status"] == "pass"
    assert run(capsys, "twist", "--catalog-id", "quasi_r/n=0", "--twist", str(sym))[0] == 4
    assert run(capsys, "verify", "--catalog-id", "quasi_r/n=0", "--checks", "twist_coherence",
               "--twist", str(sym))[0] == 4


def test_normalize_alpha(capsys):
    code, out = run(capsys, "normalize-alpha", "--alpha", '{"n": 2, "alpha": {"-2": "1"}}', "--order", "8")
    report = json.loads(out)
    assert code == 0 and report["all_match"]
    assert report["psi"]["1"] == "1" and report["psi"]["4"] == "-1/2"
    code, out = run(capsys, "normalize-alpha", "--alpha", '{"n": 3, "alpha": {}}')
    assert json.loads(out)["psi"] == {"1": "1"}
    assert run(capsys, "normalize-alpha", "--alpha", '{"n": 2}', "--order", "1")[0] == 2


def test_reports_are_deterministic(capsys):
    argv = ["verify", "--catalog-id", "generalized/r01/n=2/alpha0=1/borel", "--checks",
            "gcybe,closed_form,orthocomplement,rescale"]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[0] == 0


def test_closed_form_needs_generalized_entry(capsys):
    assert run(capsys, "verify", "--catalog-id", "quasi_r/n=1", "--checks", "closed_form")[0] == 2


def test_text_output(capsys):
    code, out = run(capsys, "verify", "--catalog-id", "quasi_r/n=0", "--checks", "skew,cybe", "--text")
    assert code == 0 and "cybe" in out and "pass" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nslab", "verify", "--catalog-id", "quasi_r/n=0",
                           "--checks", "skew"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["checks"][0]["status"] == "pass"


@pytest.mark.parametrize("check", ["reduction", "cocycle", "alt_phi", "complementary", "gcybe"])
def test_each_check_runs(capsys, check):
    target = "generalized/r0/n=3/alpha0=0" if check == "reduction" else "quasi_r/n=2/alpha0=0"
    code, out = run(capsys, "verify", "--catalog-id", target, "--checks", check)
    assert json.loads(out)["checks"][0]["check"] == check
    assert code in (0, 1)


def test_normalize_alpha_low_order_marks_untested(capsys):
    code, out = run(capsys, "normalize-alpha", "--alpha", '{"n": 2, "alpha": {"-2": "1"}}', "--order", "2")
    table = json.loads(out)
    assert code == 0
    assert table["untested_k"] == [-5, -4, -3, -2, -1]
    assert {row["k"] for row in table["residue_table"]} == set(range(0, 6))
