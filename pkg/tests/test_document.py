import copy
import json

import pytest

from presheafcoh import corpus, document
from presheafcoh.field import Field

F = Field(101)


def sample():
    return {
        "format": document.FORMAT,
        "field": "Q",
        "categories": {"I": {"builtin": "interval"}},
        "algebras": {"k": {"builtin": "k"}, "D": {"builtin": "k[x]/x^2"}},
        "diagrams": {"A": {"category": "I", "algebras": {"0": "k", "1": "k"}},
                     "B": {"category": "I", "algebras": {"0": "D", "1": "D"}}},
        "modules": {
            "R": {"diagram": "A", "regular": True},
            "S": {"diagram": "A", "actions": {"0": [[[1]]], "1": [[[1]]]}, "T": {"0<1": [["1/2"]]}},
        },
        "bimodules": {"X": {"diagram": "B", "regular": True}},
        "maps": {"f": {"source": "S", "target": "R", "components": {"0": [["2/3"]], "1": [["1/3"]]}}},
        "complexes": {"P": {"terms": ["R", "S"], "differentials": ["f"]}},
    }


def test_sample_parses_with_exact_fractions():
    ws = document.parse(sample())
    assert ws.field.p is None
    assert set(ws.modules) == {"R", "S"} and "P" in ws.complexes
    assert ws.field.format(ws.maps["f"].comps["0"][0, 0]) == "2/3"


def test_sample_round_trip():
    ws = document.parse(sample())
    doc = document.emit(ws)
    again = document.parse(json.loads(document.dumps(doc)))
    assert document.workspaces_equal(ws, again) == []
    assert document.dumps(document.emit(again)) == document.dumps(doc)


@pytest.mark.parametrize("field", [Field(101), Field(None)])
def test_corpus_round_trip(field):
    entries = corpus.canonical_corpus(field, random_count=4)
    doc = document.corpus_document(entries, field)
    ws = document.parse(json.loads(document.dumps(doc)))
    assert len(ws.diagrams) == len(entries)
    again = document.parse(json.loads(document.dumps(document.emit(ws))))
    assert document.workspaces_equal(ws, again) == []
    assert doc["field"] == field.name


def test_schema_error_is_located():
    doc = sample()
    doc["modules"]["S"]["actions"]["0"] = [[["x"]]]
    with pytest.raises(document.DocumentError) as exc:
        document.parse(doc)
    assert exc.value.where == "/modules/S/actions/0/0/0/0"


def test_unknown_key_rejected():
    doc = sample()
    doc["extra"] = 1
    with pytest.raises(document.DocumentError):
        document.parse(doc)


def test_wrong_format_rejected():
    doc = sample()
    doc["format"] = "something/else"
    with pytest.raises(document.DocumentError) as exc:
        document.parse(doc)
    assert exc.value.where == "/format"


@pytest.mark.parametrize("path,value,where,fragment", [
    (("diagrams", "A", "category"), "nope", "/diagrams/A/category", "undefined category 'nope'"),
    (("maps", "f", "source"), "Z", "/maps/f/source", "undefined module 'Z'"),
    (("complexes", "P", "differentials"), ["g"], "/complexes/P/differentials/0", "undefined map 'g'"),
])
def test_undefined_references(path, value, where, fragment):
    doc = copy.deepcopy(sample())
    node = doc
    for p in path[:-1]:
        node = node[p]
    node[path[-1]] = value
    with pytest.raises(document.DocumentError) as exc:
        document.parse(doc)
    assert exc.value.where == where and fragment in str(exc.value)


def test_non_natural_map_rejected():
    doc = sample()
    doc["maps"]["f"]["components"]["1"] = [["1"]]
    with pytest.raises(document.DocumentError) as exc:
        document.parse(doc)
    assert exc.value.where == "/maps/f"


def test_bad_category_laws_rejected():
    doc = sample()
    doc["categories"]["J"] = {"objects": ["a", "b"], "morphisms": [["1a", "a", "a"], ["1b", "b", "b"], ["u", "a", "b"]],
                              "identities": {"a": "1a", "b": "1b"}, "compose": [["1a", "u", "u"]]}
    with pytest.raises(document.DocumentError) as exc:
        document.parse(doc)
    assert exc.value.where == "/categories/J"


def test_module_law_violation_rejected():
    doc = sample()
    doc["modules"]["S"]["actions"]["0"] = [[["2"]]]  # the unit must act as the identity
    with pytest.raises(document.DocumentError) as exc:
        document.parse(doc)
    assert exc.value.where.startswith("/modules/S")


def test_bad_field_name():
    doc = sample()
    doc["field"] = "GF(q)"
    with pytest.raises(document.DocumentError) as exc:
        document.parse(doc)
    assert exc.value.where == "/field"


def test_load_from_file(tmp_path):
    path = tmp_path / "ws.json"
    path.write_text(document.dumps(sample()))
    assert "f" in document.load(str(path)).maps


def test_schema_is_valid_draft_2020_12():
    import jsonschema
    jsonschema.Draft202012Validator.check_schema(document.SCHEMA)


def test_shipped_schema_matches_code():
    from pathlib import Path
    shipped = Path(__file__).resolve().parents[1] / "docs" / "workspace.schema.json"
    assert json.loads(shipped.read_text()) == json.loads(json.dumps(document.SCHEMA))
