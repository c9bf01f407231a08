import json
import math
import subprocess
import sys

import numpy as np
import pytest

from ropelength import load_fixture
from ropelength.cli import (AnalysisReport, KnotParseError, analyze, constants_table, main,
                            oracle_check, parse_knot_file, read_knot_file)
from ropelength.fixtures import FIXTURE_NAMES
from ropelength.geometry import GeometryError

SQUARE_TEXT = "0 0 0\n1 0 0\n1 1 0\n0 1 0\n"


def test_parse_square():
    k = parse_knot_file(SQUARE_TEXT.encode())
    assert k.n == 4 and k.total_length == 4.0


def test_parse_comments_and_blanks():
    text = "# header\n\n0 0 0   # origin\n1 0 0\n1 1 0\n0 1 0\n# trailing comment\n"
    kf = read_knot_file(text)
    assert np.array_equal(kf.vertices, parse_knot_file(SQUARE_TEXT).vertices)
    assert kf.comments == ["header", "origin", "trailing comment"]


def test_parse_drops_repeated_closing_vertex(caplog):
    k = parse_knot_file(SQUARE_TEXT + "0 0 0\n")
    assert k.n == 4
    assert "repeats the first" in caplog.text


@pytest.mark.parametrize("text, msg", [
    ("0 0 0\n1 0 0\n", "need at least 3 vertices"),
    ("0 0 0\n1 0 zero\n1 1 0\n", ":2: malformed number"),
    ("0 0 0\n1 0\n1 1 0\n", ":2: expected 3 coordinates"),
    ("0 0 0\n1 0 0\n1 0 0\n0 1 0\n", ":3: duplicate"),
    ("0 0 0\n1 0 inf\n1 1 0\n", ":2: non-finite"),
])
def test_parse_errors(text, msg):
    with pytest.raises(KnotParseError, match=msg):
        parse_knot_file(text)


def test_parse_rejects_bad_utf8():
    with pytest.raises(KnotParseError, match="UTF-8"):
        parse_knot_file(b"\xff\xfe0 0 0\n")


def test_parse_degenerate_geometry_is_not_a_parse_error():
    with pytest.raises(GeometryError):
        parse_knot_file("0 0 0\n1 0 0\n2 0 0\n")


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixtures_load(name):
    assert load_fixture(name).n >= 4


def test_trefoil_fixture_shape():
    k = load_fixture("trefoil64")
    assert k.n == 64
    u = 2 * np.pi * 5 / 64
    expect = [(2 + np.cos(3 * u)) * np.cos(2 * u), (2 + np.cos(3 * u)) * np.sin(2 * u), np.sin(3 * u)]
    assert np.allclose(k.vertices[5], expect, atol=1e-15)
    assert load_fixture("figure_eight32").n == 32
    assert load_fixture("convex20").n == 20


def test_analyze_trefoil_essential():
    rep = analyze(load_fixture("trefoil64"), assume_essential=True, expect_nontrivial=True)
    assert rep.thickness["ropelength"] > 15.66
    essential = [c for c in rep.certificates if c["kind"] == "essential"]
    assert any(c["type"] == "alternating" and c["valid"] for c in essential)
    assert rep.summary["ropelength_meets_threshold"]
    assert all(chk["tier1_passed"] for chk in rep.arc_checks)


def test_analyze_convex_polygon():
    rep = analyze(load_fixture("convex20"))
    assert rep.quadrisecants == [] and rep.certificates == []
    assert rep.thickness["ropelength"] > 0
    assert rep.summary["best_unconditional_bound"] is None


def test_report_round_trip_and_schema():
    rep = analyze(load_fixture("trefoil64"), assume_essential=True, normalize=True, seed=17)
    text = rep.to_json()
    data = json.loads(text)
    for key in ("schema_version", "knot", "thickness", "quadrisecants", "certificates",
                "diagnostics", "seed", "tolerances"):
        assert key in data
    assert data["seed"] == 17
    assert set(data["knot"]) == {"n", "length"}
    assert {"min_rad", "dcsd", "thickness", "ropelength", "witnesses"} <= set(data["thickness"])
    assert {"points", "positions", "order_type", "r", "s", "t"} <= set(data["quadrisecants"][0])
    assert {"type", "assumptions", "bound", "terms"} <= set(data["certificates"][0])
    assert {"degenerate_quadruples", "dedup_merges"} <= set(data["diagnostics"])
    again = AnalysisReport.from_json(text)
    assert again == rep
    assert again.to_json() == text


def test_report_is_reproducible():
    k = load_fixture("figure_eight32")
    assert analyze(k, seed=3).to_json() == analyze(k, seed=3).to_json()


def test_report_rejects_unknown_fields():
    data = json.loads(analyze(load_fixture("square")).to_json())
    data["extra"] = 1
    with pytest.raises(ValueError):
        AnalysisReport.from_dict(data)


def test_constants_table_passes():
    rows = {r.label: r for r in constants_table()}
    assert all(r.passed for r in rows.values())
    row = rows["min 2f+g+r"]
    assert 9.3774 < row.computed < 9.3775 and 1.003 < row.argmin < 1.0031
    assert rows["alternating theorem"].computed > 15.66
    assert rows["link AABA"].computed == pytest.approx(8 * math.pi / 3 + 1 + math.sqrt(3))


def test_oracle_check_small_is_deterministic():
    a = oracle_check(grid=2, seed=42, quadruples=10, discretization=256)
    b = oracle_check(grid=2, seed=42, quadruples=10, discretization=256)
    assert a == b
    assert a["passed"]


def test_main_exit_codes(tmp_path, capsys):
    square = tmp_path / "square.knot"
    square.write_text(SQUARE_TEXT)
    assert main(["analyze", str(square)]) == 0
    assert main(["analyze", str(square), "--expect-nontrivial"]) == 3
    bad = tmp_path / "bad.knot"
    bad.write_text("0 0 0\n1 0 0\n")
    assert main(["analyze", str(bad)]) == 1
    assert main(["analyze", str(tmp_path / "missing.knot")]) == 1
    bowtie = tmp_path / "bowtie.knot"
    bowtie.write_text("0 0 0\n2 0 0\n2 1 0\n1 -1 0\n")
    assert main(["analyze", str(bowtie)]) == 2
    assert main(["analyze", "fixture:nope"]) == 1
    capsys.readouterr()


def test_main_json_output(capsys):
    assert main(["analyze", "fixture:square", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["thickness"]["ropelength"] == 4.0
    assert data["schema_version"] == 1


def test_main_text_output(capsys):
    assert main(["analyze", "fixture:trefoil64", "--assume-essential"]) == 0
    out = capsys.readouterr().out
    assert "alternating" in out and "2f(r) + 2f(s)+g(s)+s + 2f(t)" in out
    assert main(["constants"]) == 0
    out = capsys.readouterr().out
    assert "10π/3+2√3+2" in out and "15.936077" in out and "FAIL" not in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "ropelength", "analyze", "fixture:square"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert "ropelength 4.000000" in res.stdout
