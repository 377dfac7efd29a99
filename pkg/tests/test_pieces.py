import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chie import lattice
from chie.lattice import Transform, apply_transform, canonicalize
from chie.pieces import (
    BUILTINS, PieceFileError, PieceSet, builtin, enumerate_polyaboloes, load_pieces,
    parse_piece_file, serialize, shape_from_polygon,
)
from chie.solver import solve_exists
from chie.targets import enumerate_targets, find_target

SQUARE16 = [(2, 0), (4, 2), (2, 4), (0, 2)]


def test_tangram():
    ps = builtin("TANGRAM")
    assert ps.num_pieces == 7
    assert ps.total_triangles == 16
    assert sorted(m for _, m in ps.pieces) == [1, 1, 1, 2, 2]


def test_eleven():
    ps = builtin("ELEVEN")
    assert ps.num_pieces == 11
    assert ps.total_triangles == 16
    para = shape_from_polygon([(0, 0), (1, 0), (2, 1), (1, 1)])
    assert dict((s.key(), m) for s, m in ps.pieces)[para.key()] == 5


def test_sei_shonagon_has_base_three_trapezoid():
    ps = builtin("SEI_SHONAGON")
    assert ps.num_pieces == 7
    assert ps.total_triangles == 16
    trap = shape_from_polygon([(0, 0), (3, 0), (2, 1), (1, 1)])
    assert trap.size == 4
    assert trap in ps.shapes()


def test_nineteen_shape():
    ps = builtin("NINETEEN")
    assert ps.num_pieces == 7
    assert ps.total_triangles == 16


def test_builtin_names():
    assert builtin("tangram") == builtin("TANGRAM")
    with pytest.raises(KeyError):
        builtin("PENTOMINO")
    for name in BUILTINS:
        assert load_pieces(name) == builtin(name)


@pytest.mark.parametrize("name", ["TANGRAM", "SEI_SHONAGON"])
def test_forms_the_square(name):
    ok, _ = solve_exists(builtin(name), find_target(16, SQUARE16).region)
    assert ok


def test_parse_single_triangle():
    ps = parse_piece_file("pieceset one\npiece t x1\nT 0 0 SE\n")
    assert ps.total_triangles == 1
    assert ps.num_pieces == 1


def test_parse_merges_duplicates_and_comments():
    text = """pieceset two  # header
piece a x1
T 0 0 SE

piece b x2
T 5 5 NW   # same shape elsewhere
"""
    ps = parse_piece_file(text)
    assert len(ps.pieces) == 1
    assert ps.num_pieces == 3


@pytest.mark.parametrize("text, line", [
    ("pieceset x\npiece a x1\nT 0 0 NE\nT 0 0 NW\n", 2),      # overlap within a square
    ("pieceset x\npiece a x1\nT 0 0 NE\nT 3 3 SW\n", 2),      # disconnected
    ("pieceset x\npiece a x0\nT 0 0 NE\n", 2),                # zero multiplicity
    ("pieceset x\npiece a x1\nT 0 0 XX\n", 3),                # bad half
    ("pieceset x\npiece a x1\nT 0 zero NE\n", 3),
    ("pieceset x\nT 0 0 NE\n", 2),                            # outside a piece
    ("piece a x1\nT 0 0 NE\n", 1),                            # no header
    ("pieceset x\nshape a\n", 2),
    ("pieceset x\npiece a xtwo\nT 0 0 NE\n", 2),
    ("pieceset x\npiece a x1\n", 2),                          # empty piece
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(PieceFileError) as exc:
        parse_piece_file(text)
    assert exc.value.line == line
    assert str(exc.value).startswith(f"line {line}:")


def test_forbidden_quarter_pattern():
    # N and S quarters of one square cannot be a union of unit triangles; the
    # nearest triangle-level encoding overlaps and is rejected
    with pytest.raises(lattice.LatticeError):
        canonicalize({lattice.QuarterCell(0, 0, lattice.N), lattice.QuarterCell(0, 0, lattice.S)})


def test_missing_header_and_empty():
    with pytest.raises(PieceFileError):
        parse_piece_file("")
    with pytest.raises(PieceFileError):
        parse_piece_file("pieceset x\n")


@pytest.mark.parametrize("name", BUILTINS)
def test_builtin_round_trip(name):
    ps = builtin(name)
    again = parse_piece_file(serialize(ps))
    assert again == ps
    assert serialize(again) == serialize(ps)


def test_load_piece_file(tmp_path):
    p = tmp_path / "e.txt"
    p.write_text(serialize(builtin("ELEVEN")), encoding="utf-8")
    assert load_pieces(str(p)) == builtin("ELEVEN")


def test_polyabolo_counts():
    # published polyabolo counts 1, 3, 4, 14, 30, 107, 318
    assert [len(enumerate_polyaboloes(k)) for k in range(1, 8)] == [1, 3, 4, 14, 30, 107, 318]


def test_diaboloes():
    names = {
        shape_from_polygon([(0, 0), (1, 0), (1, 1), (0, 1)]).key(),
        shape_from_polygon([(0, 0), (2, 0), (1, 1)]).key(),
        shape_from_polygon([(0, 0), (1, 0), (2, 1), (1, 1)]).key(),
    }
    assert {s.key() for s in enumerate_polyaboloes(2)} == names


@pytest.mark.parametrize("k", range(1, 7))
def test_polyaboloes_canonical_and_distinct(k):
    shapes = enumerate_polyaboloes(k)
    seen = set()
    for s in shapes:
        assert canonicalize(s.cells) == s
        assert lattice.is_connected(s.region)
        for g in range(8):
            img = lattice.normalize(apply_transform(s.region, Transform(g)))
            assert img not in seen
        for g in range(8):
            seen.add(lattice.normalize(apply_transform(s.region, Transform(g))))
    assert list(shapes) == sorted(shapes)


@st.composite
def piece_sets(draw):
    items = []
    for _ in range(draw(st.integers(1, 5))):
        k = draw(st.integers(1, 5))
        items.append((draw(st.sampled_from(enumerate_polyaboloes(k))), draw(st.integers(1, 3))))
    return PieceSet.of(draw(st.sampled_from(["a", "set-b", "x1"])), items)


@settings(max_examples=200)
@given(piece_sets())
def test_serialize_round_trip(ps):
    text = serialize(ps)
    assert parse_piece_file(text) == ps
    assert serialize(parse_piece_file(text)) == text


@settings(max_examples=100)
@given(piece_sets())
def test_pieceset_invariants(ps):
    assert ps.total_triangles == sum(s.size * m for s, m in ps.pieces)
    keys = [s.key() for s in ps.shapes()]
    assert len(set(keys)) == len(keys)
    assert ps.shapes() == sorted(ps.shapes())


def test_all_targets_contain_only_valid_patterns():
    for t in enumerate_targets(16):
        lattice.check_pattern(t.region)
