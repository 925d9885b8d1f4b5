import copy
import json
import os

import pytest

from tannaka.bundle import Malformed, bundle_json, dumps, parse_bundle, parse_bundle_doc
from tannaka.cli import main
from tannaka.shipped import shipped_bundles

ROOT = os.path.join(os.path.dirname(__file__), "..", "fixtures")
SHIPPED = shipped_bundles()
VALID = ["trivial.json", "z2.json", "z3.json", "groupoid.json"]
MUTATIONS = sorted(k for k in SHIPPED if k.startswith("mutations/"))


def path(rel):
    return os.path.join(ROOT, rel)


def load(rel):
    with open(path(rel), encoding="utf-8") as fh:
        return json.load(fh)


@pytest.mark.parametrize("rel", sorted(SHIPPED))
def test_shipped_files_are_current(rel):
    with open(path(rel), encoding="utf-8") as fh:
        assert fh.read() == dumps(bundle_json(SHIPPED[rel]))


@pytest.mark.parametrize("rel", sorted(SHIPPED))
def test_parse_write_round_trip_is_byte_identical(rel):
    with open(path(rel), encoding="utf-8") as fh:
        text = fh.read()
    assert dumps(bundle_json(parse_bundle(path(rel)))) == text


def test_undeclared_object_in_hom_table():
    doc = load("z2.json")
    doc["category"]["hom"]["1"]["t"] = []
    with pytest.raises(Malformed) as e:
        parse_bundle_doc(doc)
    assert e.value.path == "category.hom.1.t"


def test_unknown_field_rejected():
    doc = load("trivial.json")
    doc["category"]["colour"] = "red"
    with pytest.raises(Malformed) as e:
        parse_bundle_doc(doc)
    assert e.value.path == "category.colour"


def test_bad_element_and_shape():
    doc = load("z2.json")
    bad = copy.deepcopy(doc)
    bad["category"]["identities"]["s"] = ["x"]
    with pytest.raises(Malformed) as e:
        parse_bundle_doc(bad)
    assert e.value.path.startswith("category.identities.s")
    bad = copy.deepcopy(doc)
    bad["category"]["identities"]["s"] = ["1", "0"]
    with pytest.raises(Malformed):
        parse_bundle_doc(bad)


def test_wrong_format_tag():
    doc = load("trivial.json")
    doc["format"] = "something-else"
    with pytest.raises(Malformed):
        parse_bundle_doc(doc)


def test_malformed_file_exits_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert main(["validate", str(p)]) == 2
    assert "error" in capsys.readouterr().err


COMMANDS_OK = [(b, c) for b in VALID for c in ["validate", "reconstruct", "galois", "site", "roundtrip"]]
COMMANDS_OK += [(b, "antipode") for b in ["trivial.json", "z2.json", "z3.json"]]
COMMANDS_OK += [(b, "fusion-build") for b in ["trivial.json", "z2.json", "z3.json"]]
COMMANDS_OK += [("groupoid.json", "export-weak")]


@pytest.mark.parametrize("rel,command", COMMANDS_OK)
def test_valid_bundles_exit_0(rel, command, tmp_path, capsys):
    out = tmp_path / "result.json"
    assert main([command, path(rel), "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["command"] == command and doc["passed"]
    for r in doc["reports"]:
        assert all(e["anchor"] for e in r["entries"]), r["title"]


def test_galois_with_second_functor():
    assert main(["galois", path("z2.json"), "--second", "F1-twisted"]) == 0


@pytest.mark.parametrize("rel", MUTATIONS)
def test_mutations_exit_1_with_witnesses(rel, tmp_path, capsys):
    out = tmp_path / "result.json"
    assert main(["validate", path(rel), "-o", str(out)]) == 1
    doc = json.loads(out.read_text())
    failed = [e for r in doc["reports"] for e in r["entries"] if e["status"] == "fail"]
    assert failed
    assert all(e["anchor"] and e.get("witness") is not None for e in failed)
    assert "FAILED" in capsys.readouterr().out


@pytest.mark.parametrize("rel,command", [("z2.json", "export-weak"), ("groupoid.json", "antipode"),
                                         ("groupoid.json", "fusion-build")])
def test_unsupported_inputs_exit_2(rel, command, capsys):
    assert main([command, path(rel)]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_unknown_functor_exits_2():
    assert main(["reconstruct", path("z2.json"), "--functor", "nope"]) == 2


def test_reconstruct_output_document(tmp_path):
    out = tmp_path / "h.json"
    assert main(["reconstruct", path("z2.json"), "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["bialgebroid"]["dim"] == 2


def test_fusion_build_output_is_a_functor(tmp_path):
    out = tmp_path / "f.json"
    assert main(["fusion-build", path("z2.json"), "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["functor"]["base"]["dim"] == 2


@pytest.mark.parametrize("command", ["validate", "site"])
def test_output_is_deterministic(command, tmp_path, monkeypatch):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main([command, path("groupoid.json"), "-o", str(a)])
    main([command, path("groupoid.json"), "-o", str(b)])
    assert a.read_bytes() == b.read_bytes()
    monkeypatch.setenv("TANNAKA_SEED", "17")
    c = tmp_path / "c.json"
    assert main([command, path("groupoid.json"), "-o", str(c)]) == 0
