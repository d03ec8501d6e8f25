import json
import subprocess
import sys

import pytest

from sharplab.cli import main
from sharplab.suite import CHECKS, SuiteConfig, ConfigError, run_suite


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc), encoding="utf-8")
    return str(p)


def test_verify_all_exact_dim2(capsys):
    code, out, _ = run(capsys, "verify", "--all", "--backend", "exact", "--dim", "2",
                       "--samples", "20")
    assert code == 0
    assert "transpose/testability: FAIL (expected)" in out
    assert "mixture/untestability: FAIL (expected)" in out
    assert "hermitian/testability: PASS" in out


def test_verify_single_check(capsys):
    code, out, _ = run(capsys, "verify", "--check", "hermitian/sharpness", "--dim", "3",
                       "--seed", "7")
    assert code == 0 and out.startswith("hermitian/sharpness: PASS")


def test_config_errors(capsys):
    code, _, err = run(capsys, "verify", "--dim", "0")
    assert code == 2 and "dimension must be ≥ 1" in err
    code, _, err = run(capsys, "verify", "--check", "no/such")
    assert code == 2 and "unknown check" in err
    assert run(capsys, "verify", "--all", "--check", "hermitian/sharpness")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["verify", "--backend", "quantum"])
    assert info.value.code == 2


def test_json_report_schema_and_determinism(capsys):
    argv = ["verify", "--all", "--dim", "2", "--samples", "10", "--format", "json"]
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0 and out1 == out2
    entries = json.loads(out1)
    assert [e["check_id"] for e in entries] == sorted(CHECKS)
    for e in entries:
        assert {"check_id", "paper_anchor", "verdict", "expected", "probes"} <= set(e)
        assert set(e) <= {"check_id", "paper_anchor", "verdict", "expected", "probes", "witness"}
        assert ("witness" in e) == (e["verdict"] == "FAIL")


def test_seed_env_var(capsys, monkeypatch):
    argv = ["verify", "--check", "hermitian/transformability", "--dim", "2", "--samples", "5",
            "--format", "json"]
    _, explicit, _ = run(capsys, *argv, "--seed", "5")
    monkeypatch.setenv("SHARPLAB_SEED", "5")
    _, from_env, _ = run(capsys, *argv)
    assert explicit == from_env
    monkeypatch.setenv("SHARPLAB_SEED", "abc")
    assert run(capsys, *argv)[0] == 2


def test_mismatch_exits_one(monkeypatch, capsys):
    from sharplab import suite
    c = CHECKS["hermitian/certainty"]
    monkeypatch.setitem(CHECKS, c.check_id, suite.Check(c.check_id, c.anchor, "FAIL", c.run))
    code, out, _ = run(capsys, "verify", "--check", "hermitian/certainty", "--dim", "2")
    assert code == 1 and "MISMATCH" in out


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0
    for cid in CHECKS:
        assert cid in out
    assert "Lemma: ♯(1)=1" in out
    code, out, _ = run(capsys, "list", "--format", "json")
    assert len(json.loads(out)) == len(CHECKS)
    assert run(capsys, "verify", "--list")[1].count("\n") == len(CHECKS)


def test_eval_doubled_scalar(tmp_path, capsys):
    doc = {"boxes": [
        {"name": "psi", "role": "state", "dims_in": [], "dims_out": [2], "matrix": ["1/2", 0]},
        {"name": "e", "role": "effect", "dims_in": [2], "dims_out": [], "matrix": [[1, 0]]}],
        "wires": [["psi", 0, "e", 0]], "inputs": [], "outputs": []}
    path = write(tmp_path, "d.json", doc)
    assert run(capsys, "eval", path)[1].strip() == "1/2"
    assert run(capsys, "eval", path, "--theory", "DCLM")[1].strip() == "1/4"
    assert run(capsys, "eval", path, "--backend", "float")[1].strip() == "0.500000 + 0.000000 i"


def test_eval_empty_and_bindings(tmp_path, capsys):
    empty = write(tmp_path, "empty.json", {"boxes": [], "wires": [], "inputs": [],
                                           "outputs": []})
    assert run(capsys, "eval", empty)[1].strip() == "1"
    doc = {"boxes": [{"name": "f", "role": "process", "dims_in": [2], "dims_out": [2]}],
           "wires": [], "inputs": [["f", 0]], "outputs": [["f", 0]]}
    path = write(tmp_path, "f.json", doc)
    code, _, err = run(capsys, "eval", path)
    assert code == 2 and "f" in err
    b = write(tmp_path, "b.json", {"f": [[0, 1], [1, 0]]})
    code, out, _ = run(capsys, "eval", path, "--bindings", b, "--format", "json")
    assert code == 0 and json.loads(out)["matrix"] == [["0", "1"], ["1", "0"]]


def test_eval_errors(tmp_path, capsys):
    bad = {"boxes": [{"name": "a", "role": "state", "dims_in": [], "dims_out": [2]},
                     {"name": "b", "role": "effect", "dims_in": [3], "dims_out": []}],
           "wires": [["a", 0, "b", 0]], "inputs": [], "outputs": []}
    code, _, err = run(capsys, "eval", write(tmp_path, "bad.json", bad))
    assert code == 2 and "DimensionMismatch" in err
    (tmp_path / "junk.json").write_text("{not json", encoding="utf-8")
    assert run(capsys, "eval", str(tmp_path / "junk.json"))[0] == 2
    assert run(capsys, "eval", str(tmp_path / "missing.json"))[0] == 2


def test_suite_config_validation():
    with pytest.raises(ConfigError):
        SuiteConfig(dims=(0,))
    with pytest.raises(ConfigError):
        SuiteConfig(samples=0)
    with pytest.raises(ConfigError):
        SuiteConfig(backend="quantum")
    code, results = run_suite(SuiteConfig(dims=(1,), samples=3))
    assert code == 0, [r.text() for r in results if not r.matches]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sharplab", "list"], capture_output=True,
                          text=True, check=False)
    assert proc.returncode == 0 and "transpose/testability" in proc.stdout
