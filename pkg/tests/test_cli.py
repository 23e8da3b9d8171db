import json

import pytest

from presheafcoh import bang, cli, document

from test_document import sample


def run(capsys, *argv):
    code = cli.main(list(argv) + ["--json"])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


@pytest.fixture
def sample_path(tmp_path):
    path = tmp_path / "ws.json"
    path.write_text(document.dumps(sample()))
    return str(path)


def test_validate_ok(capsys, sample_path):
    code, rep = run(capsys, "validate", sample_path)
    assert code == cli.EXIT_OK and rep["ok"]
    assert rep["results"]["maps"] == ["f"]


def test_validate_located_error(capsys, tmp_path):
    doc = sample()
    doc["complexes"]["P"]["terms"][0] = "nope"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    assert cli.main(["validate", str(path)]) == cli.EXIT_INPUT
    assert "/complexes/P/terms/0: undefined module 'nope'" in capsys.readouterr().err


def test_missing_file(capsys, tmp_path):
    assert cli.main(["validate", str(tmp_path / "absent.json")]) == cli.EXIT_INPUT


def test_malformed_json(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert cli.main(["validate", str(path)]) == cli.EXIT_INPUT


def test_subdivide_counts(capsys):
    code, rep = run(capsys, "subdivide", "--category", "parallel_pair", "--times", "2")
    assert code == cli.EXIT_OK
    assert [(lv["objects"], lv["morphisms"]) for lv in rep["results"]["levels"]] == [(2, 4), (4, 8), (8, 16)]


def test_subdivide_cap_is_input_error(capsys):
    assert cli.main(["subdivide", "--category", "square", "--times", "2", "--cap", "20,400"]) == cli.EXIT_INPUT


def test_subdivide_emit_round_trips(capsys, tmp_path):
    out = tmp_path / "sd.json"
    assert cli.main(["subdivide", "--category", "square", "--emit", str(out)]) == cli.EXIT_OK
    ws = document.load(str(out))
    (C,) = ws.categories.values()
    assert (len(C.objects), len(C.morphisms)) == (11, 33)


def test_hochschild_builtin(capsys):
    code, rep = run(capsys, "hochschild", "--builtin", "k[x]/x^3")
    assert code == cli.EXIT_OK
    assert rep["results"]["hochschild[standard]"] == [3, 2, 2]


def test_diagcoh_builtin(capsys):
    code, rep = run(capsys, "diagcoh", "--category", "parallel_pair")
    assert code == cli.EXIT_OK
    assert rep["results"]["H[minimal]"] == [1, 1, 0]


def test_ext_on_document(capsys, sample_path):
    code, rep = run(capsys, "ext", sample_path, "--source", "S", "--target", "R", "--field", "Q")
    assert code == cli.EXIT_OK
    assert rep["results"]["ext[natural]"] == rep["results"]["ext[minimal]"]


def test_compare_gcct_double(capsys):
    code, rep = run(capsys, "compare", "gcct", "--category", "parallel_pair", "--double")
    assert code == cli.EXIT_OK
    assert len(rep["verdicts"]) == 2 and all(v["ok"] for v in rep["verdicts"])


@pytest.mark.parametrize("kind", ["invariance", "scct", "gcct"])
def test_compare_seeded_instances(capsys, kind):
    code, rep = run(capsys, "compare", kind, "--seed", "7")
    assert code == cli.EXIT_OK, rep


def test_compare_scct_needs_poset(capsys):
    assert cli.main(["compare", "scct", "--category", "parallel_pair"]) == cli.EXIT_INPUT


def test_bang_failing_verdict_exits_one(capsys, sample_path, monkeypatch):
    monkeypatch.setattr(bang, "matrix_model_check", lambda *a, **k: False)
    assert cli.main(["bang", sample_path, "--diagram", "A"]) == cli.EXIT_FAIL


def test_budget_exceeded_exits_three(capsys):
    assert cli.main(["diagcoh", "--category", "square", "--budget", "10"]) == cli.EXIT_BUDGET
    assert "budget" in capsys.readouterr().err.lower()


def test_gen_corpus_and_validate(capsys, tmp_path):
    path = tmp_path / "corpus.json"
    assert cli.main(["gen-corpus", str(path), "--count", "3"]) == cli.EXIT_OK
    capsys.readouterr()
    code, rep = run(capsys, "validate", str(path))
    assert code == cli.EXIT_OK and len(rep["results"]["diagrams"]) == 7 + 3


def test_nerve_dot_to_stdout(capsys):
    assert cli.main(["nerve-dot", "--category", "square", "--times", "1"]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("digraph") and out.count("->") == 33 - 11


def test_reports_are_deterministic(capsys, tmp_path):
    reps = []
    for t in range(2):
        out = tmp_path / f"r{t}.json"
        assert cli.main(["compare", "invariance", "--seed", "11", "--out", str(out)]) == cli.EXIT_OK
        rep = json.loads(out.read_text())
        rep.pop("wall_clock_s")
        reps.append(rep)
    assert reps[0] == reps[1]
