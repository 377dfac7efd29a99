import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from chie import cli
from chie.pieces import PieceSet, serialize, shape_from_polygon
from chie.targets import find_target, unit_triangle_shape

SVG_NS = "{http://www.w3.org/2000/svg}"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_targets_text(capsys):
    code, out, _ = run(capsys, "targets", "--n", "16")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "f(16) = 20"
    assert len(lines) == 21
    code, out, _ = run(capsys, "targets", "--n", "1")
    assert out.splitlines()[0] == "f(1) = 1" and len(out.splitlines()) == 2


def test_targets_svg(capsys, tmp_path):
    svg = tmp_path / "cat.svg"
    code, _, _ = run(capsys, "targets", "--n", "4", "--svg", str(svg))
    assert code == 0
    root = ET.parse(svg).getroot()
    labels = [t.text for t in root.iter(SVG_NS + "text")]
    assert labels == [f"n4-t{i:02d}" for i in range(6)]


def test_targets_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "targets", "--n", "3")
    doc = json.loads(out)
    assert doc["f"] == 2 and len(doc["targets"]) == 2


def test_solve_sat_and_witness(capsys, tmp_path):
    svg = tmp_path / "w.svg"
    code, out, _ = run(capsys, "solve", "--pieces", "ELEVEN", "--target", "n16-t00", "--svg", str(svg))
    assert code == 0
    assert "SAT" in out.splitlines()[0]
    root = ET.parse(svg).getroot()
    assert root.tag == SVG_NS + "svg"
    titles = [t.text for t in root.iter(SVG_NS + "title")]
    assert len(titles) == 11


def test_solve_unsat_from_piece_file(capsys, tmp_path):
    para = shape_from_polygon([(0, 0), (1, 0), (2, 1), (1, 1)], "parallelogram")
    ps = PieceSet.of("six-parallelograms-four-triangles", [(para, 6), (unit_triangle_shape(), 4)])
    f = tmp_path / "six-parallelograms-four-triangles.txt"
    f.write_text(serialize(ps), encoding="utf-8")
    square = find_target(16, [(2, 0), (4, 2), (2, 4), (0, 2)])
    code, out, _ = run(capsys, "solve", "--pieces", str(f), "--target", square.id)
    assert code == 1
    assert "UNSAT" in out


def test_solve_count(capsys):
    square = find_target(16, [(2, 0), (4, 2), (2, 4), (0, 2)])
    code, out, _ = run(capsys, "--format", "json", "solve", "--pieces", "TANGRAM",
                       "--target", square.id, "--count", "--modulo-symmetry")
    assert code == 0
    assert json.loads(out)["count"] == 1


def test_solve_all_writes_svgs(capsys, tmp_path):
    tri = tmp_path / "sq.txt"
    tri.write_text("0 0\n1 0\n1 1\n0 1\n", encoding="utf-8")
    pf = tmp_path / "two.txt"
    pf.write_text("pieceset two\npiece t x2\nT 0 0 NE\n", encoding="utf-8")
    code, out, _ = run(capsys, "solve", "--pieces", str(pf), "--target", str(tri), "--all",
                       "--svg", str(tmp_path / "out"))
    assert code == 0
    files = sorted((tmp_path / "out").glob("*.svg"))
    assert len(files) == 2
    for p in files:
        ET.parse(p)


def test_triangle_target_file(capsys, tmp_path):
    tgt = tmp_path / "tri.txt"
    tgt.write_text("T 0 0 NE\nT 0 0 SW\n", encoding="utf-8")
    code, out, _ = run(capsys, "solve", "--pieces", "ELEVEN", "--target", str(tgt))
    assert code == 2  # area mismatch


@pytest.mark.parametrize("argv", [
    ["solve", "--pieces", "ELEVEN", "--target", "n16-t99"],
    ["solve", "--pieces", "NOPE", "--target", "n16-t00"],
    ["coverage", "--pieces", "TANGRAM", "--n", "15"],
    ["search", "--pieces", "17", "--min-coverage", "20"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["targets", "--n", "0"])
    assert exc.value.code == 2


def test_bad_piece_file_reports_line(capsys, tmp_path):
    pf = tmp_path / "bad.txt"
    pf.write_text("pieceset b\npiece a x1\nT 0 0 NE\nT 4 4 SW\n", encoding="utf-8")
    code, _, err = run(capsys, "solve", "--pieces", str(pf), "--target", "n2-t00")
    assert code == 2
    assert "line 2" in err


@pytest.mark.parametrize("name, count", [("TANGRAM", 13), ("SEI_SHONAGON", 16),
                                         ("NINETEEN", 19), ("ELEVEN", 20)])
def test_coverage(capsys, name, count):
    code, out, _ = run(capsys, "coverage", "--pieces", name)
    assert code == 0
    assert out.splitlines()[0].endswith(f": {count}/20")


def test_coverage_svg_dir(capsys, tmp_path):
    code, _, _ = run(capsys, "coverage", "--pieces", "TANGRAM", "--svg", str(tmp_path))
    assert len(list(tmp_path.glob("*.svg"))) == 13


def test_ftable(capsys, tmp_path):
    plot = tmp_path / "f.svg"
    code, out, _ = run(capsys, "ftable", "--max", "16", "--plot", str(plot))
    assert code == 0
    rows = dict(line.split() for line in out.splitlines()[1:17])
    assert (rows["1"], rows["2"], rows["3"], rows["16"]) == ("1", "3", "2", "20")
    assert "ok" in out.splitlines()[-1]
    circles = list(ET.parse(plot).getroot().iter(SVG_NS + "circle"))
    assert len(circles) == 16


def test_ftable_violation_is_fatal(capsys, monkeypatch):
    monkeypatch.setattr(cli, "ftable", lambda m: {1: 5, 2: 3})
    code, _, err = run(capsys, "ftable", "--max", "2")
    assert code == 3
    assert "doubling" in err


def test_search_cli(capsys, tmp_path):
    ck = tmp_path / "s.ckpt"
    code, out, _ = run(capsys, "--format", "json", "search", "--pieces", "11",
                       "--min-coverage", "20", "--checkpoint", str(ck))
    assert code == 0
    doc = json.loads(out)
    assert doc["found"][0]["coverage"] == 20
    assert ck.exists()
    code, out, _ = run(capsys, "search", "--pieces", "7", "--min-coverage", "20",
                       "--max-candidates", "50")
    assert code == 1


def test_subclaims_cli(capsys):
    code, out, _ = run(capsys, "subclaims")
    assert code == 0
    assert all(line.startswith("PASS ") for line in out.splitlines())


def test_outputs_are_byte_identical():
    def once(*argv):
        return subprocess.run([sys.executable, "-m", "chie.cli", *argv],
                              capture_output=True, check=True).stdout

    for argv in (["coverage", "--pieces", "SEI_SHONAGON"],
                 ["--format", "json", "coverage", "--pieces", "NINETEEN"],
                 ["--format", "json", "targets", "--n", "8"],
                 ["solve", "--pieces", "TANGRAM", "--target", "n16-t13", "--all"]):
        assert once(*argv) == once(*argv)
