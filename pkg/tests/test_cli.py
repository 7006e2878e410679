import io
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pseudolinks.bracket import bracket
from pseudolinks.cli import main, verify_report
from pseudolinks.diagram import Surface, parse_diagram, validate
from pseudolinks.fixtures import fixture_document, load_fixture
from pseudolinks.generate import random_braid_closure, random_diagram
from pseudolinks.mixed import mixed_from_document
from pseudolinks.poly import from_json, parse_canonical


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, doc, name="d.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


def test_compute_text(capsys):
    code, out, _ = run(capsys, "compute", "--fixture", "pseudo_trefoil", "--variant", "planar")
    assert code == 0
    assert parse_canonical(out.strip()) == bracket(load_fixture("pseudo_trefoil"))


def test_compute_json_matches_text(capsys):
    _, text, _ = run(capsys, "compute", "--fixture", "torus_trefoil_right")
    _, js, _ = run(capsys, "compute", "--fixture", "torus_trefoil_right", "--format", "json")
    assert from_json(json.loads(js)) == parse_canonical(text.strip())


def test_compute_from_file_and_stdin(capsys, tmp_path, monkeypatch):
    path = write(tmp_path, fixture_document("kink"))
    _, from_file, _ = run(capsys, "compute", "--input", path)
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(fixture_document("kink"))))
    _, from_stdin, _ = run(capsys, "compute", "--input", "-")
    assert from_file == from_stdin and from_file.strip() == "-1*A^3"


def test_jones_of_kink_is_one(capsys):
    code, out, _ = run(capsys, "compute", "--fixture", "kink", "--normalize", "--jones")
    assert code == 0 and out.strip() == "1"


def test_jones_needs_normalize(capsys):
    code, _, err = run(capsys, "compute", "--fixture", "kink", "--jones")
    assert code == 2 and json.loads(err)["error"] == "usage"


def test_variant_surface_mismatch(capsys):
    code, _, err = run(capsys, "compute", "--fixture", "pseudo_trefoil", "--variant", "toroidal")
    assert code == 2 and "torus" in json.loads(err)["message"]


def test_bad_json_input(capsys, tmp_path):
    code, _, err = run(capsys, "compute", "--input", write(tmp_path, "{oops"))
    assert code == 3 and json.loads(err)["error"] == "syntax"


def test_invalid_diagram_input(capsys, tmp_path):
    doc = {"surface": "plane", "crossings": [], "edges": [], "free_loops": []}
    code, _, err = run(capsys, "compute", "--input", write(tmp_path, doc))
    assert code == 3 and json.loads(err)["error"] == "validation"


def test_crossing_cap_is_an_evaluation_error(capsys):
    code, _, err = run(capsys, "compute", "--fixture", "figure_eight", "--max-crossings", "2")
    assert code == 4 and json.loads(err)["error"] == "CrossingCapError"


def test_missing_input(capsys):
    code, _, err = run(capsys, "compute")
    assert code == 2
    code, _, err = run(capsys, "compute", "--fixture", "no_such_thing")
    assert code == 3


def test_convert_annular_with_check(capsys):
    code, out, err = run(capsys, "convert", "--fixture", "annular_pseudo_trefoil", "--to", "o-mixed", "--check")
    assert code == 0 and json.loads(err)["check"] == "pass"
    m = mixed_from_document(json.loads(out))
    assert m.kind == "O"


def test_convert_toroidal_with_check(capsys):
    code, out, err = run(capsys, "convert", "--fixture", "torus_trefoil_right", "--to", "h-mixed", "--check")
    assert code == 0 and json.loads(err)["check"] == "pass"
    assert set(json.loads(err)["details"]) == {"plain", "universal", "reduced", "normalized"}


def test_convert_planar_to_o_mixed_fails(capsys):
    code, _, err = run(capsys, "convert", "--fixture", "pseudo_trefoil", "--to", "o-mixed")
    assert code == 2 and json.loads(err)["error"] == "usage"


def test_convert_forgetful(capsys):
    code, out, err = run(capsys, "convert", "--fixture", "annular_pseudo_trefoil", "--to",
                         "planar-forgetful", "--check")
    assert code == 0 and json.loads(err)["check"] == "pass"
    assert parse_diagram(out).surface == Surface.PLANE


def test_compute_on_mixed_document(capsys, tmp_path):
    _, out, _ = run(capsys, "convert", "--fixture", "torus_pair_coherent", "--to", "h-mixed")
    path = write(tmp_path, out)
    _, got, _ = run(capsys, "compute", "--input", path)
    assert parse_canonical(got.strip()) == bracket(load_fixture("torus_pair_coherent"))
    code, _, _ = run(capsys, "compute", "--input", path, "--variant", "annular")
    assert code == 2


def test_gen_torus_class(capsys):
    code, out, _ = run(capsys, "gen", "torus-class", "3", "2", "1", "annulus")
    assert code == 0
    d = parse_diagram(out)
    assert d.surface == Surface.ANNULUS and d.n_crossings == 3
    code, _, _ = run(capsys, "gen", "torus-class", "-1", "-1", "1", "annulus")
    assert code == 2


def test_gen_random_is_deterministic(capsys):
    _, one, _ = run(capsys, "gen", "random", "torus", "5", "2", "9")
    _, two, _ = run(capsys, "gen", "random", "torus", "5", "2", "9")
    assert one == two
    d = parse_diagram(one)
    assert d.n_crossings == 5 and len(d.precrossings()) == 2


def test_verify_builtin(capsys):
    code, out, _ = run(capsys, "verify", "--moves", "full", "--trials", "20", "--seed", "3")
    report = json.loads(out)
    assert code == 0 and report["passed"] == 20 and report["failures"] == []


def test_verify_report_is_deterministic():
    corpus = [("t", load_fixture("torus_trefoil_right"))]
    assert verify_report(corpus, "regular", 10, 5, 6) == verify_report(corpus, "regular", 10, 5, 6)


def test_verify_rejects_bad_counts(capsys):
    code, _, _ = run(capsys, "verify", "--moves", "regular", "--trials", "-1", "--seed", "0")
    assert code == 2


def test_selfcheck_reports_every_fixture(capsys):
    code, out, _ = run(capsys, "selfcheck")
    lines = [json.loads(x) for x in out.splitlines()]
    assert len(lines) == 6
    status = {x["fixture"]: x["status"] for x in lines}
    assert status["pseudo_trefoil"] == "pass"
    assert status["torus_trefoil_right"] == "pass"
    assert code == (1 if "fail" in status.values() else 0)


def test_threads_flag_validated(capsys):
    code, _, _ = run(capsys, "compute", "--fixture", "kink", "--threads", "0")
    assert code == 2


@settings(max_examples=20)
@given(st.sampled_from(["plane", "annulus", "torus"]), st.integers(0, 7), st.integers(0, 10**6))
def test_random_diagram_contract(surface, n, seed):
    n_pre = seed % (n + 1)
    d = random_diagram(surface, n, n_pre, seed)
    assert validate(d) == []
    assert d.n_crossings == n and len(d.precrossings()) == n_pre
    assert random_diagram(surface, n, n_pre, seed) == d


def test_random_diagram_rejects_bad_counts():
    with pytest.raises(ValueError):
        random_diagram("plane", 3, 4, 0)
    with pytest.raises(ValueError):
        random_diagram("plane", 30, 0, 0)


@given(st.integers(0, 10**6))
def test_braid_closures_are_valid(seed):
    assert validate(random_braid_closure(seed, 8, pre_fraction=0.3)) == []
