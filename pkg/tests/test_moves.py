from __future__ import annotations

import json

import pytest

from latticeknots import catalog, moves
from latticeknots.knot_id import KnotTag, classify, identify
from latticeknots.lattice import (
    CUBIC,
    SH,
    canonicalize,
    edge_length,
    normalize,
    parse_word,
    square,
    stick_census,
    validate,
)
from latticeknots.transform import apply_T_inv
from corpus import move_corpus

HEXAGON = "x^1 y^1 z^1 x^-1 y^-1 z^-1"


def test_square_corner_to_triangle():
    p = square(SH)
    site = moves.find_reducible_corner(p)
    assert site is not None
    assert site.stick_index == 1
    assert site.leg_length == 1
    out = moves.corner_to_z(p, site)
    assert len(out.result) == 3
    assert out.sticks_delta == -1 and out.edges_delta == -1
    assert stick_census(out.result).nz == 1
    assert out.move_tag == moves.MoveTag.CORNER_TO_Z


def test_corner_round_trip_through_z_replace():
    p = parse_word("x^2 y^2 x^-2 y^-2", SH)
    site = moves.find_reducible_corner(p, equal_legs=True)
    tri = moves.corner_to_z(p, site).result
    z_index = next(i for i, s in enumerate(tri.sticks) if s.dir == "z")
    back = moves.z_replace(tri, z_index)
    assert back.sticks_delta <= 1
    assert canonicalize(back.result) == canonicalize(p)


def test_corner_needs_sh():
    with pytest.raises(moves.MoveError):
        moves.find_reducible_corner(square(CUBIC))


def test_obstructed_corner():
    # a vertical stick passes through the corner triangle of the big x/y corner
    p = parse_word("x^3 y^3 x^-1 w^1 y^-2 x^-1 w^-1 x^-1 y^-1", SH)
    assert validate(p).ok
    bad = moves.CornerSite(0, 0, 1, 3, ("z", 1))
    with pytest.raises(moves.MoveError):
        moves.corner_to_z(p, bad)


def test_bevel_reduces_edges_by_one():
    p = parse_word("x^2 y^2 x^-2 y^-2", SH)
    out = moves.unit_corner_bevel(p)
    assert out.edges_delta == -1
    assert len(out.result) == 5
    assert edge_length(out.result) == 7
    assert validate(out.result).ok


def test_bevel_without_xy_corner():
    hexagon = parse_word(HEXAGON, SH)
    with pytest.raises(moves.NoXYCorner):
        moves.unit_corner_bevel(hexagon)
    with pytest.raises(moves.NoXYCorner):
        moves.bevel_any_rotation(hexagon)


def test_bevel_never_collapses_triangle():
    with pytest.raises(moves.MoveError):
        moves.bevel_any_rotation(parse_word("x^-1 y^1 z^-1", SH))


def test_r_move_involution():
    p = parse_word("x^2 y^1 z^1 x^-2 y^-1 z^-1", CUBIC)
    assert validate(p).ok
    once = moves.r_move(p, 0, 1)
    assert once.sticks_delta == 0
    i = once.site["s_index"]
    r = once.result
    # locate the swapped pair again: y then x in the result
    j = next(k for k in range(len(r)) if r.sticks[k].dir == "y" and r.sticks[(k + 1) % len(r)].dir == "x")
    twice = moves.r_move(r, j, j + 1)
    assert canonicalize(twice.result) == canonicalize(p)
    assert i == 0


def test_r_move_errors():
    p = parse_word("x^2 y^1 z^1 x^-2 y^-1 z^-1", CUBIC)
    with pytest.raises(moves.NotAdjacent):
        moves.r_move(p, 0, 3)
    with pytest.raises(moves.RectangleObstructed):
        moves.r_move(square(CUBIC), 0, 1)
    sh = parse_word(HEXAGON, SH)
    with pytest.raises(moves.NotPerpendicular):
        moves.r_move(sh, 1, 2)


def test_hexagon_z_replace_empty_square():
    hexagon = parse_word(HEXAGON, SH)
    sq = moves.find_replacement_square(hexagon, 2)
    assert sq.empty
    assert sq.side_length == 1
    out = moves.z_replace(hexagon, 2)
    assert out.sticks_delta <= 1
    assert stick_census(out.result).nz == 1
    assert classify(out.result).tag == KnotTag.UNKNOT


def test_z_replace_rejects_non_z():
    with pytest.raises(moves.NotAZStick):
        moves.z_replace(parse_word(HEXAGON, SH), 0)


def test_replacement_square_reports_w_obstruction():
    # z^-3 runs from (0,0) to (3,-3); both w-sticks sit on the border, below the diagonal
    p = parse_word("z^-3 x^-2 w^1 y^2 x^-1 w^-1 y^1", SH)
    assert validate(p).ok
    sq = moves.find_replacement_square(p, 0)
    ws = sq.w_obstructions
    assert [o.point for o in ws] == [(1, -3, 0), (0, -1, 0)]
    assert all(o.side == "lower" and o.on_border for o in ws)
    out = moves.z_replace(p, 0)
    assert out.sticks_delta <= 2
    assert identify(out.result).alexander == identify(p).alexander


def test_other_z_in_square():
    p = parse_word("z^-3 y^3 z^2 y^-2 x^-1", SH)
    assert validate(p).ok
    assert [o.stick_index for o in moves.find_replacement_square(p, 0).other_z] == [2]
    with pytest.raises(moves.OtherZInSquare):
        moves.z_replace(p, 0)


def test_squeeze_square():
    out = moves.squeeze_and_reduce(square(CUBIC))
    assert out.result.lattice == SH
    assert out.sticks_delta == -1
    assert len(out.result) == 3


def test_squeeze_needs_cubic():
    with pytest.raises(moves.MoveError):
        moves.squeeze_and_reduce(square(SH))


def test_trace_record_is_json():
    out = moves.unit_corner_bevel(parse_word("x^2 y^2 x^-2 y^-2", SH))
    rec = json.loads(out.trace_record())
    assert set(rec) == {"move_tag", "site", "sticks_delta", "edges_delta", "word_after"}
    assert rec["move_tag"] == "bevel"


def test_eliminate_z_on_hexagon():
    q, trace = moves.eliminate_z(parse_word(HEXAGON, SH))
    assert stick_census(q).nz == 0
    assert len(trace) == 2
    assert classify(apply_T_inv(q)).tag == KnotTag.UNKNOT


@pytest.mark.parametrize(
    "entry", [e for e in catalog.entries() if e.lattice == SH and e.expected != KnotTag.UNKNOT],
    ids=lambda e: e.name,
)
def test_catalog_z_elimination(entry):
    p = entry.polygon
    q, trace = moves.eliminate_z(p)
    assert all(t.sticks_delta <= 3 for t in trace)
    if stick_census(q).nz == 0:
        c = apply_T_inv(q)
        assert classify(c).tag == entry.expected
        if stick_census(p).planar == (3, 2, 2):
            assert len(c) <= 15


@pytest.mark.parametrize("entry", [e for e in catalog.entries() if e.lattice == CUBIC], ids=lambda e: e.name)
def test_catalog_squeeze(entry):
    out = moves.squeeze_and_reduce(entry.polygon)
    assert out.sticks_delta == -1
    assert classify(out.result).tag == entry.expected


# ---------------------------------------------------------------------------
# corpus-wide invariants


def test_corpus_size_and_coverage():
    apps = move_corpus()
    assert len(apps) >= 500
    tags = {a.outcome.move_tag for a in apps}
    assert tags == set(moves.MoveTag)


def test_corpus_outcomes_valid():
    for a in move_corpus():
        q = a.outcome.result
        assert validate(q).ok, a.outcome.trace_record()
        assert a.outcome.sticks_delta == len(q) - len(a.before)
        assert a.outcome.edges_delta == edge_length(q) - edge_length(a.before)


def test_corpus_bevel_edges():
    for a in move_corpus():
        if a.outcome.move_tag == moves.MoveTag.BEVEL:
            assert a.outcome.edges_delta == -1


def test_corpus_squeeze_drops_one_stick():
    for a in move_corpus():
        if a.outcome.move_tag == moves.MoveTag.SQUEEZE:
            assert a.outcome.sticks_delta == -1


def test_corpus_z_replace_bounds():
    for a in move_corpus():
        if a.outcome.move_tag != moves.MoveTag.Z_REPLACE:
            continue
        d = a.outcome.sticks_delta
        assert d <= 3
        if a.square_empty:
            assert d <= 1
        if a.square_w == 2:
            assert d <= 2
        assert stick_census(a.outcome.result).nz == stick_census(a.before).nz - 1
