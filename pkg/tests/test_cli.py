import csv
import json
import math
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from spiral_minimal.cli import main
from spiral_minimal.report import dumps

SPECS = Path(__file__).resolve().parent.parent / "specs"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_dumps_seventeen_digits():
    text = dumps({"x": 0.1, "n": 3, "z": float("nan"), "l": [1.0, True]}, indent=0)
    assert '"x": 0.10000000000000001' in text and '"z": null' in text and '"n": 3' in text
    assert json.loads(text)["x"] == 0.1


def test_domain_examples(capsys):
    code, out, _ = run(capsys, "domain", "--k1", 0, "--k2", 0, "--C1", -1, "--C2", 8)
    d = json.loads(out)
    assert code == 0 and d["c2_min"] == pytest.approx(4.0)
    assert d["s_minus"] == pytest.approx(math.pi / 8, abs=1e-13)
    assert d["s_plus"] == pytest.approx(3 * math.pi / 8, abs=1e-13)
    code, _, err = run(capsys, "domain", "--k1", 0, "--k2", 0, "--C1", -1, "--C2", 4)
    assert code == 3 and "SubcriticalC2" in err
    code, out, _ = run(capsys, "domain", "--k1", 1, "--k2", 0, "--C1", -1, "--C2", 1.05 * 6.75)
    d = json.loads(out)
    assert d["s_minus"] < math.atan(1 / math.sqrt(2)) < d["s_plus"]


def test_solve_exports(capsys, tmp_path):
    csv_path, json_path, svg_path = tmp_path / "a.csv", tmp_path / "a.json", tmp_path / "a.svg"
    code, out, _ = run(capsys, "solve", "--k1", 0, "--k2", 0, "--C1", -1, "--C2", 8, "--grid", 77,
                       "--export", csv_path, "--export", json_path, "--plot", svg_path)
    assert code == 0
    d = json.loads(out)
    assert d["J1"] == pytest.approx(math.pi / 2, abs=1e-8)
    assert d["closure"]["kind"] == "closed" and d["closure"]["m_min"] == 4
    rows = list(csv.reader(open(csv_path)))
    assert rows[0] == ["s", "s1", "s2", "sdot1", "sdot2"] and len(rows) == 78
    assert len(json.loads(json_path.read_text())["grid"]["s"]) == 77
    root = ET.parse(svg_path).getroot()
    assert root.tag == "{http://www.w3.org/2000/svg}svg" and root.get("version") == "1.1"
    assert "svg11.dtd" in svg_path.read_text()


def test_solve_bad_export(capsys, tmp_path):
    with pytest.raises(SystemExit):
        main(["solve", "--k1", "0", "--k2", "0", "--C1", "-1", "--C2", "8", "--export", str(tmp_path / "x.txt")])


def test_search_geodesic_identically(capsys):
    code, out, _ = run(capsys, "search", "--k1", 0, "--k2", 0, "--C1", -1, "--p", 1, "--q", 2, "--scan", 8)
    d = json.loads(out)
    assert code == 0 and d["identically_satisfied"] and len(d["hits"]) == 8


def test_search_finds_hit_and_empty(capsys):
    code, out, _ = run(capsys, "search", "--k1", 1, "--k2", 0, "--C1", -1, "--p", 2, "--q", 7)
    hits = json.loads(out)["hits"]
    assert code == 0 and len(hits) == 1
    assert abs(hits[0]["achieved_J1"] - 2 * math.pi / 7) < 1e-9
    code, out, _ = run(capsys, "search", "--k1", 1, "--k2", 0, "--C1", -1, "--p", 1, "--q", 2, "--scan", 16)
    assert json.loads(out)["hits"] == []


def test_search_bracket_below(capsys):
    code, _, err = run(capsys, "search", "--k1", 1, "--k2", 0, "--C1", -1, "--p", 2, "--q", 7,
                       "--bracket", 1, 10)
    assert code == 3 and "BracketBelowC2Min" in err


def test_build_great_circle(capsys):
    code, out, _ = run(capsys, "build", SPECS / "great_circle.json")
    rep = json.loads(out)
    cl = rep["nodes"][0]["closure"]
    assert code == 0 and (cl["kind"], cl["p"], cl["q"], cl["m_min"]) == ("closed", 1, 2, 4)
    assert rep["nodes"][0]["endpoint_gap"] < 1e-6


def test_build_torus_leaf_verified(capsys, tmp_path):
    spec = tmp_path / "torus.json"
    spec.write_text(json.dumps({"schema": 1, "root": {"kind": "legendrian_torus", "n": 2}}))
    code, out, _ = run(capsys, "build", spec, "--verify")
    rep = json.loads(out)
    assert code == 0 and rep["verification"][0]["failures"] == []


def test_build_exports_point_cloud(capsys, tmp_path):
    pc, hp = tmp_path / "pc.csv", tmp_path / "hopf.csv"
    code, _, _ = run(capsys, "build", SPECS / "great_circle.json", "--export", pc, "--hopf", hp, "--points", 25)
    assert code == 0
    rows = list(csv.reader(open(pc)))
    assert rows[0] == ["u0", "re0", "re1", "im0", "im1"] and len(rows) == 26
    hrows = list(csv.reader(open(hp)))[1:]
    for r in hrows:
        re0, re1, im0, im1 = map(float, r[1:])
        # representative: the largest coordinate is real and positive
        big = 0 if math.hypot(re0, im0) >= math.hypot(re1, im1) - 1e-12 else 1
        assert [im0, im1][big] == 0.0 and [re0, re1][big] > 0


@pytest.mark.parametrize(
    "doc,pointer",
    [
        ({"schema": 2, "root": {"kind": "point"}}, "/schema"),
        ({"schema": 1, "root": {"kind": "sphere"}}, "/root/kind"),
        ({"schema": 1, "root": {"kind": "spiral", "C1": -1, "C2": 8, "left": {"kind": "point"},
                                "right": {"kind": "real_sphere", "n": 0}}}, "/root/right/n"),
        ({"schema": 1, "root": {"kind": "spiral", "C1": -1, "left": {"kind": "point"},
                                "right": {"kind": "point"}}}, "/root"),
        ({"schema": 1, "root": {"kind": "clifford_join", "left": {"kind": "point"},
                                "right": {"kind": "legendrian_torus", "n": 2, "m": 1}}}, "/root/right"),
    ],
)
def test_build_schema_errors(capsys, tmp_path, doc, pointer):
    spec = tmp_path / "bad.json"
    spec.write_text(json.dumps(doc))
    code, _, err = run(capsys, "build", spec)
    assert code == 2
    assert f"SchemaError: {pointer}:" in err


def test_build_invalid_json(capsys, tmp_path):
    spec = tmp_path / "bad.json"
    spec.write_text("{not json")
    code, _, err = run(capsys, "build", spec)
    assert code == 2


def test_build_unreachable_target(capsys, tmp_path):
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({"schema": 1, "root": {
        "kind": "spiral", "C1": -1, "closing": {"p": 1, "q": 2},
        "left": {"kind": "real_sphere", "n": 1}, "right": {"kind": "point"}}}))
    code, _, err = run(capsys, "build", spec)
    assert code == 2 and "/root/closing" in err


def test_build_subcritical_exit(capsys, tmp_path):
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({"schema": 1, "root": {
        "kind": "spiral", "C1": -1, "C2": 3.0, "half_periods": 2,
        "left": {"kind": "point"}, "right": {"kind": "point"}}}))
    code, _, _ = run(capsys, "build", spec)
    assert code == 3


def test_build_certification_failure_exit(capsys, tmp_path, monkeypatch):
    import spiral_minimal.cli as cli

    monkeypatch.setattr(cli, "flag_failures", lambda chart, rep: ["is_minimal: forced"])
    code, out, err = run(capsys, "build", SPECS / "great_circle.json", "--verify", "--samples", 3)
    assert code == 4 and "forced" in err
    assert json.loads(out)["verification"][0]["failures"] == ["is_minimal: forced"]


def test_quadrature_disagreement_exit(capsys, monkeypatch):
    import spiral_minimal.curve as curve

    monkeypatch.setattr(curve, "_qaws", lambda params, domain, which: (1.0, 0.0))
    code, _, err = run(capsys, "solve", "--k1", 0, "--k2", 0, "--C1", -1, "--C2", 8)
    assert code == 5 and "QuadratureDisagreement" in err


def test_build_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "build", SPECS / "great_circle.json", "--verify", "--samples", 10, "--report", a)
    run(capsys, "build", SPECS / "great_circle.json", "--verify", "--samples", 10, "--report", b, "--threads", 3)
    assert a.read_bytes() == b.read_bytes()
