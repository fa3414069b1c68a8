import json

import pytest

from spanforge.cli import run


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_has_pullbacks_finsurj(capsys, fixture_dir):
    code, out, _ = call(capsys, "has-pullbacks", fixture_dir / "finsurj12.json", "--json")
    assert code == 1
    doc = json.loads(out)
    assert doc["counterexample"]["cospan"]["c_L"] == doc["counterexample"]["cospan"]["c_R"] == "S2_S1:00"


def test_pullback_four_elements(capsys, fixture_dir):
    code, out, _ = call(capsys, "pullback", fixture_dir / "finset04.json", "--cospan", "S2_S1:00,S2_S1:00",
                        "--canonical", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["witnesses"][0]["pullback"]["apex"] == "S4"
    assert doc["stats"]["pullbacks_found"] == 24


def test_human_output_names_legs(capsys, fixture_dir):
    code, out, _ = call(capsys, "pullback", fixture_dir / "b2.json", "--cospan", "a<=top,b<=top")
    assert code == 0
    assert "s_L=bot<=a" in out and "c_R=b<=top" in out


def test_span_tight_verdicts(capsys, fixture_dir):
    assert call(capsys, "span-tight", fixture_dir / "id_b2.functor.json")[0] == 0
    assert call(capsys, "span-tight", fixture_dir / "INCL.functor.json")[0] == 1
    code, out, _ = call(capsys, "span-tight", fixture_dir / "negative_tightness.functor.json", "--json")
    assert code == 1
    assert json.loads(out)["counterexample"]["reason"] == "span isomorphism does not lift"


def test_check_laws_and_classic(capsys, fixture_dir):
    assert call(capsys, "check-laws", fixture_dir / "id_z2.functor.json")[0] == 0
    assert call(capsys, "check-laws", fixture_dir / "id_b2.functor.json", "--mode", "sampled")[0] == 2
    assert call(capsys, "check-laws", fixture_dir / "id_b2.functor.json", "--mode", "sampled",
                "--samples", 20, "--seed", 3)[0] == 0
    assert call(capsys, "check-laws", fixture_dir / "INCL.functor.json")[0] == 1
    assert call(capsys, "classic-equiv", fixture_dir / "b2.json")[0] == 0
    assert call(capsys, "classic-equiv", fixture_dir / "finsurj12.json")[0] == 1


def test_preserves_and_fpullback(capsys, fixture_dir):
    assert call(capsys, "preserves", fixture_dir / "hom_z2.functor.json")[0] == 0
    code, out, _ = call(capsys, "fpullback", fixture_dir / "INCL.functor.json", "--cospan",
                        "S2_S2:01,S2_S2:10", "--json")
    assert code == 0
    assert json.loads(out)["stats"]["f_pullbacks_found"] == 2


def test_morphism_queries(capsys, fixture_dir):
    code, out, _ = call(capsys, "compose", fixture_dir / "z2.json", "s", "s", "--json")
    assert (code, json.loads(out)["equals"]) == (0, "e")
    code, out, _ = call(capsys, "hom", fixture_dir / "b2.json", "bot", "top", "--json")
    assert json.loads(out)["morphisms"] == ["bot<=top"]
    assert call(capsys, "invert", fixture_dir / "b2.json", "bot<=top")[0] == 1
    assert call(capsys, "compose", fixture_dir / "b2.json", "a<=top", "bot<=a")[0] == 2


def test_span_compose(capsys, fixture_dir):
    args = ["compose", fixture_dir / "id_z2.functor.json", "--span1", "e,s", "--span2", "e,s", "--json"]
    code, out, _ = call(capsys, *args)
    assert code == 0
    assert json.loads(out)["composite"]["s_R"] == "e"
    assert call(capsys, "compose", fixture_dir / "INCL.functor.json", "--span1", "S2_S1:00,S2_S1:00",
                "--span2", "S2_S1:00,S2_S1:00", "--force")[0] == 1


def test_parse_error_points_at_location(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"name": "x",\n "objects": [}\n')
    code, _, err = call(capsys, "has-pullbacks", bad)
    assert code == 2
    assert "bad.json:2:" in err


def test_invalid_category(capsys, fixture_dir, tmp_path):
    raw = json.loads((fixture_dir / "z2.json").read_text())
    raw["composition"][1]["equals"] = "e"
    bad = tmp_path / "z2_bad.json"
    bad.write_text(json.dumps(raw))
    code, _, err = call(capsys, "has-pullbacks", bad)
    assert code == 2
    assert "z2_bad.json" in err
    code, out, _ = call(capsys, "validate", bad, "--json")
    assert code == 1
    assert json.loads(out)["valid"] is False
    assert call(capsys, "validate", fixture_dir / "z2.json")[0] == 0
    assert call(capsys, "validate", tmp_path / "missing.json")[0] == 2


def test_budget_exit(capsys, fixture_dir, monkeypatch):
    assert call(capsys, "has-pullbacks", fixture_dir / "fintop02.json", "--budget", 50)[0] == 3
    monkeypatch.setenv("SPANFORGE_BUDGET", "50")
    code, out, _ = call(capsys, "has-pullbacks", fixture_dir / "fintop02.json", "--json")
    assert code == 3
    assert json.loads(out)["budget_hit"] is True


def test_unknown_names(capsys, fixture_dir):
    assert call(capsys, "pullback", fixture_dir / "b2.json", "--cospan", "nope,a<=top")[0] == 2
    assert call(capsys, "pullback", fixture_dir / "b2.json", "--cospan", "a<=a,b<=b")[0] == 2
    assert call(capsys, "nonsense")[0] == 2


def test_gen_matches_fixture_files(capsys, fixture_dir, tmp_path):
    out = tmp_path / "finsurj.json"
    assert call(capsys, "gen", "finsurj", "--sizes", "1,2", "-o", out)[0] == 0
    assert out.read_bytes() == (fixture_dir / "finsurj12.json").read_bytes()
    rel = tmp_path / "rel.json"
    rel.write_text(json.dumps({"name": "B2", "elements": ["bot", "a", "b", "top"],
                               "relation": [["bot", "a"], ["bot", "b"], ["a", "top"], ["b", "top"],
                                            ["bot", "top"]]}))
    assert call(capsys, "gen", "poset", "--relation", rel, "-o", tmp_path / "b2.json")[0] == 0
    assert (tmp_path / "b2.json").read_bytes() == (fixture_dir / "b2.json").read_bytes()
    table = tmp_path / "table.json"
    table.write_text(json.dumps({"name": "Z2", "elements": ["e", "s"], "table": [["e", "s"], ["s", "e"]]}))
    assert call(capsys, "gen", "group", "--table", table, "-o", tmp_path / "z2.json")[0] == 0
    assert (tmp_path / "z2.json").read_bytes() == (fixture_dir / "z2.json").read_bytes()


def test_gen_functors_resolve_relative_paths(capsys, fixture_dir, tmp_path):
    out = tmp_path / "sub" / "hom.functor.json"
    out.parent.mkdir()
    code = call(capsys, "gen", "hom", "--base", "*", "--cat", fixture_dir / "z2.json",
                "--target", fixture_dir / "finset02.json", "-o", out)[0]
    assert code == 0
    assert call(capsys, "preserves", out)[0] == 0
    out2 = tmp_path / "incl.functor.json"
    assert call(capsys, "gen", "inclusion", "--sub", fixture_dir / "finsurj12.json",
                "--super", fixture_dir / "finset04.json", "--name", "INCL", "-o", out2)[0] == 0
    assert call(capsys, "span-tight", out2)[0] == 1
    code, out, _ = call(capsys, "gen", "finset", "--max-size", 1)
    assert code == 0 and json.loads(out)["objects"] == ["S0", "S1"]


QUERIES = [
    ["has-pullbacks", "fintop02.json"],
    ["span-tight", "negative_tightness.functor.json"],
    ["check-laws", "id_b2.functor.json", "--mode", "sampled", "--samples", "40", "--seed", "11"],
    ["preserves", "forget_fintop02.functor.json"],
    ["pullback", "finset04.json", "--cospan", "S2_S1:00,S2_S1:00", "--all"],
]


@pytest.mark.parametrize("query", QUERIES, ids=lambda q: q[0])
def test_json_is_byte_identical(capsys, fixture_dir, query):
    argv = [query[0], fixture_dir / query[1], *query[2:], "--json"]
    first = call(capsys, *argv)
    again = call(capsys, *argv)
    threaded = call(capsys, *argv, "--workers", 4)
    assert first == again == threaded
