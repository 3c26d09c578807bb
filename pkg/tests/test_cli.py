import csv
import json
import subprocess
import sys

import jsonschema
import pytest

from realmono import zoo
from realmono.cli import ExperimentConfig, UsageError, load_schema, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    report = json.loads(out.out) if out.out.strip() else None
    return code, report, out.err


def test_affine_positive_exit_zero(capsys):
    code, rep, _ = run_cli(capsys, "check-monotone", "--zoo", "affine-pos", "--dims", "1,2,3", "--trials", "1000",
                           "--seed", "7")
    assert code == 0 and rep["outcome"] == "no_violation_found" and rep["config"]["seed"] == 7


def test_neg_inverse_exit_one_with_witness(capsys):
    code, rep, _ = run_cli(capsys, "check-monotone", "--zoo", "neg-inverse", "--dims", "1", "--trials", "100",
                           "--seed", "7")
    assert code == 1
    w = rep["result"]["witness"]
    assert w["dim"] == 1 and w["A"][0]["rows"] == 1


def test_choi_transpose(capsys):
    code, rep, _ = run_cli(capsys, "choi", "--map", "transpose", "--n", "2")
    assert code == 1 and min(rep["result"]["eigenvalues"]) == pytest.approx(-1)


@pytest.mark.parametrize("argv", [
    ["check-monotone", "--zoo", "no-such-member"],
    ["check-monotone", "--spec", "/nonexistent/spec.json"],
    ["check-monotone", "--zoo", "identity", "--trials", "0"],
    ["check-monotone", "--zoo", "identity", "--dims", "0,1"],
    ["check-monotone"],
    ["block-construction", "--lam", "0"],
    ["lipschitz-probe", "--zoo", "neg-re-inverse", "--center", "0.5", "--radius", "0.5"],
    ["linearity-test", "--field", "sin"],
    ["frobnicate"],
])
def test_usage_errors_exit_two(capsys, argv):
    assert main(argv) == 2


def test_bad_spec_file(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"arity": 1, "expr": {"op": "const", "value": {"rows": 2}}}')
    assert main(["check-monotone", "--spec", str(p)]) == 2
    p.write_text("not json")
    assert main(["check-monotone", "--spec", str(p)]) == 2


def test_spec_file_round_trip(tmp_path, capsys):
    p = tmp_path / "f.json"
    p.write_text(json.dumps(zoo.spec("neg-re-inverse").to_json()))
    code, rep, _ = run_cli(capsys, "check-concave", "--spec", str(p), "--trials", "50")
    assert code == 0 and rep["config"]["spec"] == str(p)


COMMANDS = [
    ["check-monotone", "--zoo", "square", "--trials", "50"],
    ["check-concave", "--zoo", "geomean-hpd", "--trials", "30"],
    ["check-free-axioms", "--zoo", "cube", "--trials", "10"],
    ["check-similarity", "--zoo", "neg-re-inverse", "--trials", "10", "--dims", "2"],
    ["derivative-criterion", "--zoo", "neg-inverse", "--trials", "40"],
    ["choi", "--map", "kraus", "--n", "3"],
    ["choi", "--map", "conjugation"],
    ["re-independence", "--zoo", "neg-re-inverse", "--trials", "30"],
    ["affine-fit", "--zoo", "affine-complex"],
    ["affine-fit", "--zoo", "square"],
    ["block-construction", "--trials", "10", "--arity", "2"],
    ["lipschitz-probe", "--zoo", "neg-re-inverse", "--trials", "30"],
    ["lipschitz-probe", "--zoo", "square", "--trials", "30"],
    ["agh-probe", "--trials", "2000"],
    ["agh-probe", "--trials", "200", "--domain", "hermitian_PD"],
    ["hypograph-convexity", "--zoo", "sqrt-re", "--trials", "30"],
    ["pluriharmonic", "--field", "z^3", "--trials", "10"],
    ["pluriharmonic", "--field", "abs2", "--trials", "5"],
    ["linearity-test", "--field", "(1+i)z"],
    ["linearity-test", "--field", "exp-1"],
    ["verify-all", "--only", "8"],
]


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: "-".join(a[:3]))
def test_reports_validate_and_replay(argv, tmp_path, capsys):
    schema = load_schema()
    outs = []
    for i in range(2):
        path = tmp_path / f"r{i}.json"
        code = main(argv + ["--out", str(path)])
        assert code in (0, 1)
        text = path.read_text()
        rep = json.loads(text)
        jsonschema.validate(rep, schema)
        assert rep["exit_code"] == code and rep["command"] == argv[0]
        rep.pop("timestamp")
        outs.append(json.dumps(rep, sort_keys=True))
    assert outs[0] == outs[1]


def test_expected_outcomes(capsys):
    expect = {
        ("affine-fit", "square"): 1, ("affine-fit", "affine-complex"): 0,
        ("lipschitz-probe", "square"): "hypothesis_not_met", ("linearity-test", "exp-1"): 1,
        ("pluriharmonic", "abs2"): 1, ("pluriharmonic", "z^3"): 0, ("agh-probe", "2000"): 1,
    }
    for argv in COMMANDS:
        key = (argv[0], argv[2])
        if key not in expect:
            continue
        code, rep, _ = run_cli(capsys, *argv)
        want = expect[key]
        assert (rep["outcome"] if isinstance(want, str) else code) == want, argv
    code, rep, _ = run_cli(capsys, "linearity-test", "--field", "(1+i)z")
    # linear, although Re f depends on Im z, so the lemma's hypothesis is not what made it so
    assert rep["outcome"] == "no_violation_found" and rep["result"]["im_independent"] is False


def test_csv_output(tmp_path, capsys):
    path = tmp_path / "m.csv"
    assert main(["check-monotone", "--zoo", "identity", "--trials", "12", "--csv", str(path)]) == 0
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["trial", "dim", "margin"] and len(rows) == 13
    assert [int(r[1]) for r in rows[1:4]] == [1, 2, 3]


def test_seed_env_fallback(monkeypatch, capsys):
    monkeypatch.setenv("REALMONO_SEED", "123")
    _, rep, _ = run_cli(capsys, "check-monotone", "--zoo", "identity", "--trials", "3")
    assert rep["config"]["seed"] == 123
    _, rep, _ = run_cli(capsys, "check-monotone", "--zoo", "identity", "--trials", "3", "--seed", "4")
    assert rep["config"]["seed"] == 4
    monkeypatch.setenv("REALMONO_SEED", "abc")
    assert main(["check-monotone", "--zoo", "identity", "--trials", "3"]) == 2


def test_workers_do_not_change_report(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["hypograph-convexity", "--zoo", "identity", "--trials", "40", "--out", str(a)])
    main(["hypograph-convexity", "--zoo", "identity", "--trials", "40", "--workers", "4", "--out", str(b)])
    ra, rb = json.loads(a.read_text()), json.loads(b.read_text())
    ra.pop("timestamp"), rb.pop("timestamp")
    assert ra == rb


def test_verify_all_prints_lines(capsys):
    code, rep, err = run_cli(capsys, "verify-all", "--only", "4,8")
    assert code == 0 and len(rep["result"]) == 2
    assert err.count("[PASS]") == 2


def test_config_invariants():
    with pytest.raises(UsageError):
        ExperimentConfig("check-monotone", trials=0)
    with pytest.raises(UsageError):
        ExperimentConfig("check-monotone", dims=[])


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "realmono.cli", "choi", "--map", "identity"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["result"]["cp"] is True
