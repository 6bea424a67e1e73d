import json
from pathlib import Path

import pytest

from svir import cli, jobs

ROOT = Path(__file__).resolve().parent.parent
CORPUS = sorted((ROOT / "jobs").glob("*.json"))
GOLDEN = ROOT / "tests" / "golden"

EXPECTED_STATUS = {
    "06_der_witness_central.json": 1, "08_der_intersect_L1.json": 1, "16_aut_check_bad_center.json": 1,
    "18_aut_local_pointwise.json": 1, "20_aut_2local_pair_failure.json": 1,
}


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_corpus_covers_every_task():
    tasks = {json.loads(p.read_text())["task"] for p in CORPUS}
    assert tasks == set(jobs.TASKS)
    assert len(CORPUS) >= 12


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.name)
def test_corpus_matches_golden_and_verifies(path):
    job = jobs.load_job(path)
    report = jobs.run_job(job)
    assert report.status == EXPECTED_STATUS.get(path.name, 0)
    assert report.dumps() == (GOLDEN / path.name).read_text()
    assert jobs.verify_report(job, report.doc) == []


def test_spec_example_reports():
    def doc(name):
        return json.loads((GOLDEN / name).read_text())
    assert doc("01_bracket_virasoro.json")["result"]["value"] == "4*L(0) + (1/2)*C"
    assert doc("03_jacobi_half.json")["verdict"] == "0 violations"
    fixer = doc("13_aut_fit_fixer.json")["result"]
    assert fixer["families"] == [{"a": "1", "eps": "+1", "h": None, "s": ["-1", "1"]}]
    assert "omega" in fixer["fixer_set_note"]
    assert doc("18_aut_local_pointwise.json")["result"]["probe"] == "L(1) + G(1) + G(2)"


def test_inline_bracket(capsys):
    code, out, _ = run(["bracket", "L(2)", "L(-2)", "--json"], capsys)
    assert code == 0
    assert json.loads(out)["result"]["value"] == "4*L(0) + (1/2)*C"


def test_inline_matches_job_file(capsys, tmp_path):
    _, a, _ = run(["aut-fit", "L(1)", "L(1)", "--json"], capsys)
    _, b, _ = run(["run", "--job", str(ROOT / "jobs" / "13_aut_fit_fixer.json"), "--json"], capsys)
    assert json.loads(a)["result"] == json.loads(b)["result"]


@pytest.mark.parametrize("argv,code", [
    (["jacobi", "--eps", "1/2", "--radius", "2"], 0),
    (["der-local", "L(0)", "3*L(5)", "--radius", "6"], 0),
    (["der-witness", "L(0)=C", "--ansatz-radius", "4"], 1),
    (["der-intersect", "L(0)", "--no-center", "--target-radius", "2"], 0),
    (["der-pipeline", "L(2) + G(1)", "--no-center"], 0),
    (["aut-apply", "--params", "eps=-1,a=2,s=i", "L(3)", "G(0)"], 0),
    (["aut-fit", "L(1)", "3*L(-1)"], 0),
    (["aut-fit", "L(1) + G(1) + G(2)", "L(1) - G(1) + G(2)"], 1),
    (["aut-check", "--omega", "--radius", "2"], 0),
    (["aut-check", "C=2*C", "--fill", "identity", "--fill-radius", "4", "--radius", "2"], 1),
    (["aut-local", "--fill", "omega", "--fill-radius", "3", "--radius", "2"], 0),
    (["aut-2local", "--fallback", "eps=1,a=2,s=1", "--radius", "2"], 0),
    (["aut-2local", "G(1) + G(2)=G(1) - G(2)", "--fallback", "identity", "--radius", "2"], 1),
])
def test_inline_exit_codes(argv, code, capsys):
    assert run(argv + ["--verify"], capsys)[0] == code


@pytest.mark.parametrize("argv", [
    ["bracket", "L(1"],
    ["bracket", "G(1/2)", "L(1)"],
    ["bracket", "L(1)"],
    ["bracket", "L(1) + C", "L(2)", "--no-center"],
    ["aut-apply", "L(1)"],
    ["aut-apply", "--params", "eps=1,a=2,s=i", "L(1)"],
    ["aut-apply", "--eps", "1/2", "--params", "eps=1,a=2,s=1", "L(1)"],
    ["aut-local", "L(1)=L(1)"],
    ["run"],
    ["nonsense"],
])
def test_usage_errors_exit_2(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2


def test_schema_violation_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"task": "bracket", "config": {"epsilon": "1/3", "with_center": True}}))
    code, _, err = run(["run", "--job", str(p)], capsys)
    assert code == 2 and "schema" in err
    p.write_text("{not json")
    assert run(["run", "--job", str(p)], capsys)[0] == 2


def test_task_mismatch_exit_2(capsys):
    code, _, err = run(["jacobi", "--job", str(ROOT / "jobs" / "01_bracket_virasoro.json")], capsys)
    assert code == 2 and "does not match" in err


def test_job_and_inline_are_exclusive(capsys):
    assert run(["bracket", "L(1)", "L(2)", "--job", str(ROOT / "jobs" / "01_bracket_virasoro.json")], capsys)[0] == 2


def test_out_file_is_machine_report(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, text, _ = run(["bracket", "G(0)", "G(0)", "--out", str(out)], capsys)
    assert code == 0 and "verdict: ok" in text
    doc = json.loads(out.read_text())
    assert doc["result"]["value"] == "2*L(0) - (1/12)*C"


def test_verify_catches_tampering():
    job = jobs.load_job(ROOT / "jobs" / "14_aut_fit_flip.json")
    doc = jobs.run_job(job).doc
    doc["certificate"]["candidates"].pop()
    assert jobs.verify_report(job, doc)
    job = jobs.load_job(ROOT / "jobs" / "05_der_witness_inner.json")
    doc = jobs.run_job(job).doc
    doc["certificate"]["witness"] = "L(2)"
    assert jobs.verify_report(job, doc)
