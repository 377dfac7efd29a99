import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chie.pieces import PieceSet, builtin, enumerate_polyaboloes
from chie.search import (
    SearchBudget, candidates_for, decode_pieceset, encode_pieceset, partitions, read_checkpoint,
    search_piece_sets, verify_ten_piece_subclaims,
)
from chie.solver import coverage


def _partitions_brute(total, parts):
    out = set()

    def rec(left, k, acc):
        if k == 0:
            if left == 0:
                out.add(tuple(sorted(acc, reverse=True)))
            return
        for p in range(1, left + 1):
            rec(left - p, k - 1, acc + [p])

    rec(total, parts, [])
    return out


@pytest.mark.parametrize("total, parts", [(16, 7), (16, 11), (10, 3), (5, 5), (6, 1)])
def test_partitions(total, parts):
    got = partitions(total, parts)
    assert len(got) == len(set(got))
    assert set(got) == _partitions_brute(total, parts)
    assert [p[0] for p in got] == sorted(p[0] for p in got)


def test_candidates_are_duplicate_free():
    cands = list(candidates_for((3, 2, 2, 1)))
    keys = {tuple(sorted(s.key() for s in c)) for c in cands}
    assert len(keys) == len(cands)
    # 4 triaboloes, multisets of 2 from 3 diaboloes, 1 monobolo
    assert len(cands) == 4 * 6 * 1


@settings(max_examples=100)
@given(st.lists(st.tuples(st.integers(1, 5), st.integers(0, 200), st.integers(1, 3)),
                min_size=1, max_size=4))
def test_encode_decode_round_trip(spec):
    items = []
    for k, i, m in spec:
        shapes = enumerate_polyaboloes(k)
        items.append((shapes[i % len(shapes)], m))
    ps = PieceSet.of("found", items)
    assert decode_pieceset(encode_pieceset(ps)) == ps


def test_budget_validation():
    with pytest.raises(ValueError):
        SearchBudget(max_candidates=0)
    with pytest.raises(ValueError):
        SearchBudget(wall_clock=-1)
    with pytest.raises(ValueError):
        search_piece_sets(17, 16, 20)
    with pytest.raises(ValueError):
        search_piece_sets(7, 16, 21)


def test_all_singles():
    r = search_piece_sets(16, 16, 20, SearchBudget(max_candidates=10))
    assert r.best.coverage == 20
    assert r.candidates == 1


def test_eleven_pieces_reach_twenty():
    r = search_piece_sets(11, 16, 20, SearchBudget(max_candidates=5000, max_results=5))
    assert r.found
    assert r.exhausted
    for hit in r.found:
        assert coverage(hit.pieceset).count == hit.coverage == 20
    assert any(hit.pieceset.key() == builtin("ELEVEN").key() for hit in r.found)


def test_resume_is_deterministic(tmp_path):
    budget = dict(max_results=2, max_solver_nodes=100_000)
    full = search_piece_sets(7, 16, 19, SearchBudget(max_candidates=50_000, **budget))
    assert len(full.found) == 2

    ck = tmp_path / "search.ckpt"
    part = search_piece_sets(7, 16, 19, SearchBudget(max_candidates=700, checkpoint=str(ck),
                                                      checkpoint_every=100, **budget))
    assert part.stop_reason in ("max_candidates", "max_results")
    params, cursor, saved = read_checkpoint(ck)
    assert params == (7, 16, 19)
    assert saved.candidates == part.candidates
    while True:
        res = search_piece_sets(7, 16, 19, SearchBudget(max_candidates=700, checkpoint_every=100,
                                                        **budget), resume=str(ck))
        if res.stop_reason != "max_candidates":
            break
    assert res.candidates == full.candidates
    assert res.cursor == full.cursor
    assert [encode_pieceset(f.pieceset) for f in res.found] == \
        [encode_pieceset(f.pieceset) for f in full.found]
    assert [f.formable for f in res.found] == [f.formable for f in full.found]


def test_resume_rejects_other_parameters(tmp_path):
    ck = tmp_path / "c.ckpt"
    search_piece_sets(11, 16, 20, SearchBudget(max_candidates=5, checkpoint=str(ck)))
    with pytest.raises(ValueError):
        search_piece_sets(7, 16, 19, resume=str(ck))


def test_progress_lines(monkeypatch):
    from chie import search
    monkeypatch.setattr(search, "PROGRESS_EVERY", 100)
    lines = []
    search_piece_sets(7, 16, 20, SearchBudget(max_candidates=250), progress=lines.append)
    assert len(lines) == 2
    assert lines[0].startswith("candidates=100 ")


def test_ten_piece_subclaims():
    claims = verify_ten_piece_subclaims()
    assert len(claims) >= 5
    for c in claims:
        assert c.passed, (c.name, c.detail)


def test_parallel_workers_match_serial(monkeypatch):
    serial = search_piece_sets(7, 16, 19, SearchBudget(max_candidates=2000, max_results=1))
    monkeypatch.setenv("CHIE_THREADS", "2")
    par = search_piece_sets(7, 16, 19, SearchBudget(max_candidates=2000, max_results=1))
    assert par.candidates == serial.candidates
    assert [encode_pieceset(f.pieceset) for f in par.found] == \
        [encode_pieceset(f.pieceset) for f in serial.found]
