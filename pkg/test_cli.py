"""
🧪 Command line: JSON payloads and exit codes
"""

import json
import math

import pytest

from geocenter.cli import cmd_dispatch, to_json_text


def run(capsys, *argv):
    code = cmd_dispatch(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    assert code == 0
    return json.loads(out)


def test_json_text_uses_17_digits():
    assert to_json_text(0.1) == "0.10000000000000001"
    assert to_json_text({"a": [1, True, None, float("nan")]}) == '{"a": [1, true, null, null]}'
    with pytest.raises(TypeError):
        to_json_text(object())


def test_json_text_escapes_control_characters():
    text = to_json_text({"out": "a\nb\t\"c\"\\", "case": "G-(0,0,3)"})
    assert json.loads(text) == {"out": "a\nb\t\"c\"\\", "case": "G-(0,0,3)"}
    assert "\n" not in text


class TestQueries:
    def test_validate(self, capsys):
        out = run_json(capsys, "validate", "--instance", "unit_square")
        assert out["valid"] is True
        assert (out["n"], out["holes"], out["visibility_edges"]) == (4, 0, 6)
        assert out["general_position"]["clean"] is True

    def test_validate_reports_collinear_vertices(self, capsys):
        out = run_json(capsys, "validate", "--instance", "D1")
        assert out["general_position"]["clean"] is False
        assert len(out["general_position"]["collinear"]) == 8

    def test_validate_domain_file(self, capsys, tmp_path):
        path = tmp_path / "square.json"
        path.write_text('{"outer": [[0, 0], [0, 2], [2, 2], [2, 0]], "holes": []}')
        out = run_json(capsys, "validate", "--domain", str(path))
        assert out["n"] == 4

    def test_dist(self, capsys):
        out = run_json(capsys, "dist", "--instance", "D1", "--from", "2,5", "--to", "8,5")
        assert out["distance"] == pytest.approx(2.0 + 2.0 * math.sqrt(5.0))
        assert out["paths"] == 2

    def test_paths(self, capsys):
        out = run_json(capsys, "paths", "--instance", "D1", "--from", "2,5", "--to", "8,5")
        assert len(out["paths"]) == 2
        assert {tuple(p["vertices"]) for p in out["paths"]} == {(4, 7), (5, 6)}

    def test_farthest(self, capsys):
        out = run_json(capsys, "farthest", "--instance", "D1", "--s", "2,5")
        assert out["dmax"] == pytest.approx(math.sqrt(89.0))
        assert sorted(tuple(f["point"]) for f in out["farthest"]) == [(10.0, 0.0), (10.0, 10.0)]

    def test_pirange_special(self, capsys):
        out = run_json(capsys, "pirange", "--instance", "D3", "--s", "0,1", "--t", "0,-1.2")
        assert out == {"range": "empty", "special": True}

    def test_admissible(self, capsys):
        out = run_json(capsys, "admissible", "--instance", "unit_square", "--s", "0.25,0.5", "--t", "1,1")
        assert len(out["range"]) == 1

    def test_oracle_bracket(self, capsys):
        out = run_json(capsys, "oracle", "--instance", "unit_square", "--grid", "0.05")
        lo, hi = out["bracket"]
        assert lo <= math.sqrt(0.5) <= hi

    def test_jitter_seed_cleans_the_domain(self, capsys):
        out = run_json(capsys, "validate", "--instance", "D1", "--seed", "20160822")
        assert out["general_position"]["collinear"] == []


class TestRender:
    def test_stdout(self, capsys):
        code, out = run(capsys, "render", "--instance", "D1", "--layers", "domain,visibility-graph")
        assert code == 0
        assert out.startswith("<?xml")
        assert '<g id="visibility-graph">' in out

    def test_file(self, capsys, tmp_path):
        target = tmp_path / "d1.svg"
        out = run_json(
            capsys, "render", "--instance", "D1", "--layers", "paths,domain", "--from", "2,5", "--to", "8,5",
            "--out", str(target),
        )
        assert out["layers"] == ["domain", "paths"]
        assert target.read_text().count('<polyline class="path"') == 2

    def test_side_output_of_a_query(self, capsys, tmp_path):
        target = tmp_path / "dist.svg"
        run_json(capsys, "dist", "--instance", "D1", "--from", "2,5", "--to", "8,5", "--out", str(target))
        assert target.exists()


class TestExitCodes:
    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["dist", "--instance", "D1", "--from", "2", "--to", "8,5"],
            ["validate", "--instance", "D9"],
            ["render", "--instance", "D1", "--layers", "domain,sky"],
            ["render", "--instance", "D1", "--layers", "paths"],
            ["oracle", "--instance", "D1", "--grid", "-1"],
            ["oracle", "--instance", "D1", "--grid", "0"],
            ["oracle", "--instance", "D1", "--grid", "inf"],
            ["render", "--instance", "D1", "--layers", "grid-heatmap", "--grid", "0"],
        ],
    )
    def test_usage(self, capsys, argv):
        code, _ = run(capsys, *argv)
        assert code == 1

    def test_point_in_a_hole(self, capsys):
        code, out = run(capsys, "dist", "--instance", "D1", "--from", "5,5", "--to", "1,1")
        assert code == 2
        assert out == ""

    def test_bad_documents(self, capsys, tmp_path):
        broken = tmp_path / "broken.json"
        broken.write_text("{not json")
        assert run(capsys, "validate", "--domain", str(broken))[0] == 2
        assert run(capsys, "validate", "--domain", str(tmp_path / "missing.json"))[0] == 2
        bowtie = tmp_path / "bowtie.json"
        bowtie.write_text('{"outer": [[0, 0], [1, 1], [1, 0], [0, 1]]}')
        assert run(capsys, "validate", "--domain", str(bowtie))[0] == 2

    def test_general_position_required(self, capsys):
        code, _ = run(capsys, "candidates", "--instance", "D1", "--case", "vertex")
        assert code == 2

    def test_path_explosion(self, capsys, tmp_path, restore_settings):
        cfg = tmp_path / "tight.yaml"
        cfg.write_text("geodesic:\n  path_cap: 1\n")
        code, _ = run(capsys, "paths", "--instance", "D1", "--from", "2,5", "--to", "8,5", "--config", str(cfg))
        assert code == 3
