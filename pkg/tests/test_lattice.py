from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latticeknots.lattice import (
    CUBIC,
    SH,
    IllegalDirection,
    NonMaximalPolygon,
    Polygon,
    Stick,
    WordSyntaxError,
    apply_symmetry,
    canonical_key,
    canonicalize,
    compact_levels,
    edge_length,
    edge_totals,
    mirror,
    normalize,
    parse_word,
    planar_rotation,
    polygon_from_key,
    properly_leveled,
    read_knotw,
    reverse,
    rotate_word,
    scale,
    square,
    stick_census,
    symmetries,
    to_knotw,
    translate,
    validate,
    vertices,
    w_levels,
)
from oracles import raster_embedded, uf_properly_leveled
from polygen import polygons, random_polygon


def test_parse_unit_square():
    p = parse_word("x^1 y^1 x^-1 y^-1", CUBIC)
    assert p.sticks == (Stick("x", 1), Stick("y", 1), Stick("x", -1), Stick("y", -1))
    assert p.base == (0, 0, 0)


def test_parse_open_sh_path_is_not_closed():
    p = parse_word("x^-1 y^1", SH)
    assert len(p) == 2
    assert not validate(p).closed


def test_parse_headers_and_comments():
    text = "# a comment\nlattice: sh\nbase: 1 -2 3\nx^2 w^1  # trailing\nx^-2 w^-1\n"
    p = parse_word(text)
    assert p.lattice == SH
    assert p.base == (1, -2, 3)
    assert p.word == "x^2 w^1 x^-2 w^-1"


def test_parse_accepts_explicit_plus():
    assert parse_word("x^+2 x^-2", CUBIC).sticks[0] == Stick("x", 2)


@pytest.mark.parametrize(
    "text, offset",
    [("x^1 y^q", 4), ("x^1\nyy^2", 4), ("x1", 0), ("x^0", 0)],
)
def test_parse_errors_name_token_and_offset(text, offset):
    with pytest.raises(WordSyntaxError) as info:
        parse_word(text, CUBIC)
    assert info.value.offset == offset
    assert repr(info.value.token) in str(info.value)


def test_illegal_direction_for_cubic():
    with pytest.raises(IllegalDirection):
        parse_word("w^1 w^-1", CUBIC)


def test_missing_lattice():
    with pytest.raises(ValueError):
        parse_word("x^1")


def test_knotw_round_trip(tmp_path):
    p = parse_word("x^2 w^1 y^1 w^-1 x^-2 y^-1", SH)
    p = translate(p, (3, 0, -1))
    f = tmp_path / "p.knotw"
    f.write_text(to_knotw(p, ["hello"]))
    assert read_knotw(f) == p
    assert to_knotw(read_knotw(f), ["hello"]) == f.read_text()


def test_vertices_examples():
    assert vertices(square()) == [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0), (0, 0, 0)]
    assert vertices(parse_word("w^2", SH)) == [(0, 0, 0), (0, 0, 2)]
    assert vertices(parse_word("z^3", SH)) == [(0, 0, 0), (-3, 3, 0)]


def test_validate_examples():
    rep = validate(square())
    assert rep.closed and rep.maximal and rep.embedded and rep.ok
    assert not validate(parse_word("x^2 y^1 x^-2 y^1", CUBIC)).closed


def test_validate_sh_transversal_crossing():
    # x-stick (0,0)->(4,0) in (u,v) and z-stick (3,-1)->(1,1) meet at (2,0)
    p = parse_word("x^2 y^-1 z^2 x^-1 y^-1 x^1", SH)
    rep = validate(p)
    assert rep.closed
    assert not rep.embedded
    assert rep.first_violation is not None


def test_validate_overlap_and_vertex_touch():
    assert not validate(parse_word("x^2 y^1 x^-1 y^-1 x^1 y^-1 x^-2 y^1", CUBIC)).embedded
    # figure-eight shaped: two squares sharing a vertex
    assert not validate(parse_word("x^1 y^1 x^-1 y^-2 x^-1 y^1 x^1", CUBIC)).embedded


def test_non_maximal_word_flagged():
    p = Polygon(CUBIC, (Stick("x", 1), Stick("x", 1), Stick("y", 1), Stick("x", -2), Stick("y", -1)))
    assert not validate(p).maximal
    with pytest.raises(NonMaximalPolygon):
        stick_census(p)
    q = normalize(p)
    assert q.word == "x^2 y^1 x^-2 y^-1"
    assert validate(q).ok


def test_normalize_drops_cancelling_sticks():
    p = Polygon(CUBIC, (Stick("x", 2), Stick("x", -2), Stick("y", 1), Stick("x", 1), Stick("y", -1), Stick("x", -1)))
    q = normalize(p)
    assert validate(q).ok
    assert len(q) == 4


def test_stick_census_examples():
    assert stick_census(square()) == stick_census(square(SH))
    assert stick_census(square()).planar == (2, 2, 0)
    p = parse_word("x^1 y^1 z^1 w^1 x^-1 y^-1 z^-1 w^-1", SH)
    c = stick_census(p)
    assert (c.nx, c.ny, c.nz, c.nw) == (2, 2, 2, 2)
    assert c.total == 8


def test_edge_length_examples():
    assert edge_length(square()) == 4
    p = parse_word("x^3 y^2 x^-3 y^-2", CUBIC)
    assert edge_length(p) == 10
    assert edge_totals(p) == {"x": 6, "y": 4, "z": 0}


def test_levels_planar_polygon():
    hexagon = parse_word("x^1 y^1 z^1 x^-1 y^-1 z^-1", SH)
    assert w_levels(hexagon) == [0]
    assert properly_leveled(hexagon)


def test_stacked_squares_with_split_level():
    # level 0 holds two disjoint arcs joined through level 1
    p = parse_word("x^1 w^1 x^2 w^-1 x^1 y^1 x^-1 w^1 x^-2 w^-1 x^-1 y^-1", SH)
    assert validate(p).ok
    assert len(p) == 12
    assert w_levels(p) == [0, 1]
    assert not properly_leveled(p)
    assert not uf_properly_leveled(p)


def test_ten_stick_split_level_counterexample():
    p = parse_word("w^1 x^1 w^-1 x^1 y^1 x^-1 w^1 x^-1 w^-1 y^-1", SH)
    assert validate(p).ok and len(p) == 10
    assert not properly_leveled(p)
    assert properly_leveled(p) == uf_properly_leveled(p)


def test_compact_levels():
    p = parse_word("x^1 w^5 x^-1 w^-5", SH)
    q = compact_levels(p)
    assert w_levels(q) == [0, 1]
    assert validate(q).ok


def test_canonical_square_rotations():
    sq = square()
    rotated = parse_word("y^1 x^-1 y^-1 x^1", CUBIC)
    assert canonicalize(sq) == canonicalize(rotated)
    assert canonicalize(translate(sq, (5, -2, 7))) == canonicalize(sq)


def test_canonical_sh_rotation_example():
    p = parse_word("x^1 z^1 w^1 x^-1 z^-1 w^-1", SH)
    g = planar_rotation(2)  # x -> z direction cycle
    assert canonicalize(apply_symmetry(p, g)) == canonicalize(p)


def test_group_orders():
    assert len(symmetries(SH)) == 24
    assert len(symmetries(CUBIC)) == 48
    assert len(symmetries(SH, proper_only=True)) == 12
    assert len(symmetries(CUBIC, proper_only=True)) == 24


def test_canonical_key_round_trip():
    for p in polygons(11, 30, SH):
        q = polygon_from_key(SH, canonical_key(p))
        assert canonical_key(q) == canonical_key(p)
        assert validate(q).ok


def test_reverse_and_rotate_word():
    p = polygons(5, 1, SH)[0]
    assert canonical_key(reverse(p)) == canonical_key(p)
    assert canonical_key(rotate_word(p, 3)) == canonical_key(p)
    assert validate(rotate_word(p, 3)).ok
    assert validate(reverse(p)).ok


def test_scale_keeps_validity():
    for p in polygons(3, 20, SH):
        assert validate(scale(p, 2)).ok


def test_mirror_is_involution():
    p = polygons(9, 1, SH)[0]
    assert mirror(mirror(p)) == p


# ---------------------------------------------------------------------------
# properties


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from([CUBIC, SH]))
def test_closed_first_vertex_equals_last(seed, lattice):
    p = random_polygon(random.Random(seed), lattice)
    vs = vertices(p)
    assert vs[0] == vs[-1]
    c = stick_census(p)
    assert c.total == len(p)
    assert edge_length(p) == sum(abs(s.length) for s in p.sticks)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from([CUBIC, SH]), st.integers(4, 12))
def test_embedding_agrees_with_raster_oracle(seed, lattice, k):
    # random closed words, valid or not, all with maximal sticks
    rng = random.Random(seed)
    dirs = ("x", "y", "z") if lattice == CUBIC else ("x", "y", "z", "w")
    sticks = []
    while len(sticks) < k:
        d = rng.choice(dirs)
        if sticks and sticks[-1].dir == d:
            continue
        sticks.append(Stick(d, rng.choice((1, 2, -1, -2))))
    p = Polygon(lattice, tuple(sticks))
    rep = validate(p)
    if not (rep.closed and rep.maximal):
        p = random_polygon(rng, lattice, max_sticks=k + 3, max_len=2)
        rep = validate(p)
    assert rep.embedded == raster_embedded(p)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_embedding_oracle_on_closed_near_misses(seed):
    # closing a random walk directly produces many self-intersecting polygons
    rng = random.Random(seed)
    sticks = []
    for _ in range(rng.randint(3, 9)):
        d = rng.choice("xyzw")
        if sticks and sticks[-1].dir == d:
            continue
        sticks.append(Stick(d, rng.choice((1, 2, -1, -2))))
    a = sum(s.vector(SH)[0] for s in sticks)
    b = sum(s.vector(SH)[1] for s in sticks)
    c = sum(s.vector(SH)[2] for s in sticks)
    sticks += [Stick(d, -n) for d, n in (("x", a), ("y", b), ("w", c)) if n]
    try:
        p = normalize(Polygon(SH, tuple(sticks)))
    except ValueError:
        return
    if len(p) < 3:
        return
    assert validate(p).embedded == raster_embedded(p)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from([CUBIC, SH]), st.data())
def test_canonical_constant_on_orbits(seed, lattice, data):
    p = random_polygon(random.Random(seed), lattice)
    g = data.draw(st.sampled_from(symmetries(lattice)))
    k = data.draw(st.integers(0, len(p) - 1))
    q = translate(rotate_word(apply_symmetry(p, g), k), (1, 2, 3))
    if data.draw(st.booleans()):
        q = reverse(q)
    assert canonicalize(q) == canonicalize(p)
    c = canonicalize(p)
    assert canonicalize(c) == c


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_proper_leveling_matches_union_find(seed):
    p = random_polygon(random.Random(seed), SH, vertical_bias=0.45)
    assert properly_leveled(p) == uf_properly_leveled(p)
    if properly_leveled(p) and any(s.dir == "w" for s in p.sticks):
        assert sum(1 for s in p.sticks if s.dir == "w") == len(w_levels(p))
