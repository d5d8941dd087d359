import json
import shutil
from pathlib import Path

import pytest

from higherdirac.cli import main, summary_table
from higherdirac.documents import load, run_document, run_path

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def _doc(name):
    return json.loads((CORPUS / name).read_text())


# -- documents ------------------------------------------------------------------

def test_run_document_pass():
    out = run_document(_doc("master-so3.json"))
    assert out.ok and out.verdict == "pass" and out.exit_code == 0
    assert out.to_dict()["document"] == "master-so3"


def test_expected_failure_is_ok():
    doc = _doc("master-broken-jacobi.json")
    assert run_document(doc).ok
    del doc["expect"]
    out = run_document(doc)
    assert out.verdict == "fail" and not out.ok and out.exit_code == 1


def test_toml_document_loads():
    doc = load(CORPUS / "master-heisenberg.toml")
    assert doc["kind"] == "master-check" and doc["payload"]["k"] == 3
    assert run_path(CORPUS / "master-heisenberg.toml").ok


@pytest.mark.parametrize("doc", [
    {"schema": "higherdirac/1", "kind": "master-check"},
    {"schema": "other/9", "name": "x", "kind": "master-check", "payload": {}},
    {"schema": "higherdirac/1", "name": "x", "kind": "no-such-kind", "payload": {}},
    [1, 2, 3],
])
def test_schema_errors(doc):
    out = run_document(doc)
    assert out.error and out.exit_code == 2 and out.verdict == "error"


def test_unknown_lie_algebra_is_an_input_error():
    doc = _doc("master-so3.json")
    doc["payload"]["algebroid"]["lie_algebra"] = "e8"
    assert run_document(doc).exit_code == 2


def test_unreadable_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    out = run_path(bad)
    assert out.exit_code == 2 and out.name == "bad.json"


# -- command line -----------------------------------------------------------------

def test_run_json_and_out(tmp_path, capsys):
    report = tmp_path / "r.json"
    code = main(["run", str(CORPUS / "master-so3.json"), "--format", "json", "--out", str(report)])
    assert code == 0
    printed = json.loads(capsys.readouterr().out)
    assert printed == json.loads(report.read_text())
    assert printed["verdict"] == "pass" and printed["ok"] is True


def test_run_human(capsys):
    assert main(["run", str(CORPUS / "master-broken-jacobi.json")]) == 0
    text = capsys.readouterr().out
    assert text.startswith("master-broken-jacobi [master-check]: OK (expected fail)")


def test_corpus_pinpoints_the_failing_document(tmp_path, capsys):
    shutil.copy(CORPUS / "master-so3.json", tmp_path)
    doc = _doc("master-broken-jacobi.json")
    del doc["expect"]
    doc["name"] = "culprit"
    (tmp_path / "culprit.json").write_text(json.dumps(doc))
    (tmp_path / "notes.txt").write_text("ignored")
    assert main(["corpus", str(tmp_path)]) == 1
    text = capsys.readouterr().out
    rows = {line.split()[0]: line.split()[-1] for line in text.splitlines()[1:3]}
    assert rows == {"culprit": "FAILED", "master-so3": "ok"}
    assert "2 documents, 1 ok, 1 not ok" in text
    assert "culprit [master-check]: NOT OK" in text


def test_corpus_error_wins(tmp_path):
    shutil.copy(CORPUS / "master-so3.json", tmp_path)
    (tmp_path / "broken.json").write_text("[")
    assert main(["corpus", str(tmp_path)]) == 2


def test_corpus_json_format(tmp_path, capsys):
    shutil.copy(CORPUS / "master-so3.json", tmp_path)
    shutil.copy(CORPUS / "master-heisenberg.toml", tmp_path)
    assert main(["corpus", str(tmp_path), "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert [d["document"] for d in data["documents"]] == ["master-heisenberg-toml", "master-so3"]


def test_corpus_missing_directory(tmp_path):
    assert main(["corpus", str(tmp_path / "nope")]) == 2


def test_empty_summary():
    assert summary_table([]) == "no documents"
