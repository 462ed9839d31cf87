import json

import pytest

from conftest import THREE_ROSES, make_pillow
from negcurv import io
from negcurv.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


@pytest.fixture
def files(tmp_path):
    io.write_json(tmp_path / "pillow.json", io.complex_to_json(make_pillow()))
    io.write_json(tmp_path / "three.json", THREE_ROSES)
    (tmp_path / "loops.json").write_text(json.dumps({"loops": [["a", "b"], ["a", "B"]]}))
    (tmp_path / "loop.json").write_text(json.dumps(["a", "b", "a", "B"]))
    (tmp_path / "broken.json").write_text('{"vertices": [1,]}')
    return tmp_path


def test_recipe_glue_check_pipeline(capsys, files):
    g, k, r = files / "g.json", files / "k.json", files / "r.json"
    assert run(capsys, "recipe", "double", "abaB", "--out", g)[0] == 0
    code, out = run(capsys, "glue", g, "--out", k, "--report", r)
    assert code == 0 and out["verdict"] == "pass"
    assert io.load_json(r)["verdict"] == "pass"
    code, out = run(capsys, "check", k)
    assert code == 0 and out["passed"] and out["euler_characteristic"] == -2
    code, out = run(capsys, "validate", k)
    assert code == 0 and out["valid"]


def test_check_pillow_fails(capsys, files):
    code, out = run(capsys, "check", files / "pillow.json")
    assert code == 1
    assert out["failing"] == ["x", "y", "z"]


def test_proper_power_exit_code(capsys):
    code, out = run(capsys, "recipe", "double", "abab")
    assert code == 2
    assert out["witness"]["kind"] == "proper power"


def test_malformed_json_location(capsys, files):
    code, out = run(capsys, "check", files / "broken.json")
    assert code == 2
    assert out["location"] == "line 1 column 17"


def test_geodesic_and_transversalize(capsys, files):
    assert run(capsys, "recipe", "rose", "2", "--out", files / "rose.json")[0] == 0
    code, out = run(capsys, "geodesic", files / "rose.json", files / "loop.json")
    assert code == 0 and out["geodesic"] and out["length"] == 4.0
    code, out = run(capsys, "transversalize", files / "rose.json", files / "loops.json")
    assert code == 0 and out["final_intersections"] == 0 and out["link_condition"]["passed"]
    (files / "same.json").write_text(json.dumps([["a", "b"], ["a", "b"]]))
    code, out = run(capsys, "transversalize", files / "rose.json", files / "same.json")
    assert code == 1 and out["witness"]["kind"] == "common power"


def test_geodesic_rejects_open_loop(capsys, files):
    (files / "open.json").write_text(json.dumps(["p", "r"]))
    code, _ = run(capsys, "geodesic", files / "pillow.json", files / "open.json")
    assert code == 2


def test_compare(capsys, files):
    code, out = run(capsys, "compare", files / "pillow.json", "--factor", "0.5")
    assert code == 0
    assert out["excess_angle"] == pytest.approx(0.0604609170923220, abs=1e-14)
    assert run(capsys, "compare", files / "pillow.json", "--factor", "1.5")[0] == 2


def test_graph_recipe(capsys, files):
    code, out = run(capsys, "recipe", "graph", files / "three.json", "--out", files / "g3.json")
    assert code == 0
    code, out = run(capsys, "glue", files / "g3.json")
    assert code == 0 and out["audit"]["euler"]["actual"] == -4


def test_glue_rejects_circle_between_circles(capsys, files):
    doc = {
        "vertices": [{"id": "w", "type": "N"}, {"id": "z", "type": "N"}],
        "edges": [
            {"id": "e", "rev": "e~", "src": "w", "dst": "z", "kind": "circle", "degree": 1},
            {"id": "e~", "rev": "e", "src": "z", "dst": "w", "kind": "circle", "degree": 1},
        ],
    }
    io.write_json(files / "nn.json", doc)
    code, out = run(capsys, "glue", files / "nn.json")
    assert code == 2 and out["location"] == "normalize"


def test_bad_tolerance(capsys, files):
    assert main(["--tolerance", "-1", "check", str(files / "pillow.json")]) == 2
