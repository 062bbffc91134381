"""Knot-type preserving rewrites of lattice polygons.

Every move here is an instance of one primitive: a run of consecutive unit
edges lying in one lattice plane is replaced by another path in the same
plane with the same endpoints.  The move is accepted when the region swept
between the two paths holds no point of the rest of the polygon.  Because
every crossing of lattice lines in these planes is a lattice point, it is
enough to test lattice points.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Optional

from .lattice import (
    CUBIC,
    SH,
    UNIT,
    LatticeError,
    Polygon,
    Stick,
    apply_symmetry,
    edge_length,
    lattice_points,
    normalize,
    planar_rotation,
    scale,
    symmetries,
    validate,
    vertices,
)
from .transform import apply_T, edges_to_polygon, free_reduce


class MoveError(LatticeError):
    pass


class ObstructedTriangle(MoveError):
    pass


class NoXYCorner(MoveError):
    pass


class NotAdjacent(MoveError):
    pass


class NotPerpendicular(MoveError):
    pass


class RectangleObstructed(MoveError):
    pass


class NotAZStick(MoveError):
    pass


class OtherZInSquare(MoveError):
    pass


class SquareObstructed(MoveError):
    pass


class PCaseUnresolvable(MoveError):
    pass


class CornerSelectionFailed(MoveError):
    pass


class MoveTag(str, Enum):
    CORNER_TO_Z = "corner_to_z"
    BEVEL = "bevel"
    R_MOVE = "r_move"
    Z_REPLACE = "z_replace"
    SQUEEZE = "squeeze"


@dataclass(frozen=True)
class MoveOutcome:
    result: Polygon
    sticks_delta: int
    edges_delta: int
    move_tag: MoveTag
    site: dict = field(default_factory=dict, compare=False)

    def trace_record(self) -> str:
        rec = {
            "move_tag": self.move_tag.value,
            "site": self.site,
            "sticks_delta": self.sticks_delta,
            "edges_delta": self.edges_delta,
            "word_after": self.result.word,
        }
        return json.dumps(rec, sort_keys=True)


# ---------------------------------------------------------------------------
# unit-edge machinery


Edge = tuple  # (dir, +1 or -1)


def unit_edges(p: Polygon) -> list[Edge]:
    out = []
    for s in p.sticks:
        g = 1 if s.length > 0 else -1
        out.extend([(s.dir, g)] * abs(s.length))
    return out


def _step(q, e, lattice):
    u = UNIT[lattice][e[0]]
    g = e[1]
    return (q[0] + g * u[0], q[1] + g * u[1], q[2] + g * u[2])


def _walk(start, edges, lattice) -> list:
    pts = [start]
    for e in edges:
        pts.append(_step(pts[-1], e, lattice))
    return pts


def _stick_edge_offsets(p: Polygon) -> list[int]:
    """Index of the first unit edge of every stick (plus the total at the end)."""
    out = [0]
    for s in p.sticks:
        out.append(out[-1] + abs(s.length))
    return out


def _plane_of(lattice: str, dirs: set[str], anchor):
    """2D coordinates and a membership test for the lattice plane holding *dirs*.

    Returns None when the directions do not span a lattice plane.
    """
    a0, b0, c0 = anchor
    if lattice == SH:
        planar = dirs - {"w"}
        if "w" not in dirs:
            return (lambda q: (q[0], q[1])), (lambda q: q[2] == c0)
        if len(planar) > 1:
            return None
        d = next(iter(planar)) if planar else "x"
        if d == "x":
            return (lambda q: (q[0], q[2])), (lambda q: q[1] == b0)
        if d == "y":
            return (lambda q: (q[1], q[2])), (lambda q: q[0] == a0)
        return (lambda q: (q[1], q[2])), (lambda q: q[0] + q[1] == a0 + b0)
    axes = {"x": 0, "y": 1, "z": 2}
    used = sorted(axes[d] for d in dirs)
    if len(used) == 3:
        return None
    if len(used) == 1:
        used = [used[0], (used[0] + 1) % 3]
        used.sort()
    i, j = used
    k = 3 - i - j
    return (lambda q: (q[i], q[j])), (lambda q: q[k] == anchor[k])


def _on_segment(p, a, b) -> bool:
    cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
    if cross != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def _winding(p, loop) -> int:
    w = 0
    n = len(loop)
    for i in range(n):
        a, b = loop[i], loop[(i + 1) % n]
        if a[1] <= p[1]:
            if b[1] > p[1] and (b[0] - a[0]) * (p[1] - a[1]) - (p[0] - a[0]) * (b[1] - a[1]) > 0:
                w += 1
        elif b[1] <= p[1] and (b[0] - a[0]) * (p[1] - a[1]) - (p[0] - a[0]) * (b[1] - a[1]) < 0:
            w -= 1
    return w


def _region_hits(loop2d: list, candidates2d: list) -> list:
    """Candidates lying on the closed loop or inside it (non-zero winding)."""
    if not candidates2d:
        return []
    xs = [q[0] for q in loop2d]
    ys = [q[1] for q in loop2d]
    lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), min(ys), max(ys)
    hits = []
    n = len(loop2d)
    for c in candidates2d:
        if not (lo_x <= c[0] <= hi_x and lo_y <= c[1] <= hi_y):
            continue
        if any(_on_segment(c, loop2d[i], loop2d[(i + 1) % n]) for i in range(n)):
            hits.append(c)
        elif _winding(c, loop2d) != 0:
            hits.append(c)
    return hits


@dataclass(frozen=True)
class _Replacement:
    result: Polygon
    obstructions: tuple


def _replace(p: Polygon, start: int, count: int, new_edges: list[Edge]) -> _Replacement:
    """Replace unit edges start..start+count-1 (cyclic) by *new_edges*.

    Raises MoveError when the paths are not coplanar or do not share
    endpoints; returns the obstructing points when the swept region is not
    empty (result is then the input).
    """
    lat = p.lattice
    edges = unit_edges(p)
    m = len(edges)
    if not 0 < count < m:
        raise MoveError("window must be a proper part of the polygon")
    start %= m
    pts = _walk(p.base, edges, lat)
    rot = edges[start:] + edges[:start]
    anchor = pts[start]
    old = rot[:count]
    rest = rot[count:]
    new, _ = free_reduce(list(new_edges))
    old_pts = _walk(anchor, old, lat)
    new_pts = _walk(anchor, new, lat)
    if old_pts[-1] != new_pts[-1]:
        raise MoveError("replacement path does not end where the window ends")
    plane = _plane_of(lat, {e[0] for e in old} | {e[0] for e in new}, anchor)
    if plane is None:
        raise MoveError("window and replacement are not coplanar")
    proj, member = plane
    rest_pts = _walk(old_pts[-1], rest, lat)[1:-1]
    old_set = set(old_pts)
    candidates = [q for q in rest_pts if member(q) and q not in old_set]
    # new path points that land on the polygon are caught as boundary hits
    loop3 = old_pts[:-1] + list(reversed(new_pts))[:-1]
    loop2 = [proj(q) for q in loop3]
    cand2 = {proj(q): q for q in candidates}
    hits = _region_hits(loop2, list(cand2))
    if hits:
        return _Replacement(p, tuple(sorted(cand2[h] for h in hits)))
    out_edges = new + rest
    reduced, front = free_reduce(out_edges, cyclic=True)
    base = anchor
    for e in front:
        base = _step(base, e, lat)
    q = edges_to_polygon(lat, reduced, base)
    if len(q.sticks) < 3:
        raise MoveError("replacement collapses the polygon")
    rep = validate(q)
    if not rep.ok:
        raise MoveError(f"replacement produced an invalid polygon: {rep.first_violation}")
    return _Replacement(q, ())


def _outcome(p: Polygon, q: Polygon, tag: MoveTag, site: dict) -> MoveOutcome:
    return MoveOutcome(q, len(q.sticks) - len(p.sticks), edge_length(q) - edge_length(p), tag, site)


def _prepared(p: Polygon) -> Polygon:
    rep = validate(p)
    if not rep.closed or not rep.embedded:
        raise MoveError(f"moves need a closed embedded polygon: {rep.first_violation or rep}")
    return normalize(p)


# ---------------------------------------------------------------------------
# corners


def _travel(lattice: str, s: Stick) -> tuple[int, int, int]:
    u = UNIT[lattice][s.dir]
    g = 1 if s.length > 0 else -1
    return (g * u[0], g * u[1], g * u[2])


_PLANAR_UNITS = {
    (1, 0, 0): ("x", 1),
    (-1, 0, 0): ("x", -1),
    (0, 1, 0): ("y", 1),
    (0, -1, 0): ("y", -1),
    (-1, 1, 0): ("z", 1),
    (1, -1, 0): ("z", -1),
}


@dataclass(frozen=True)
class CornerSite:
    """Two consecutive sticks meeting at a 60 degree corner of the sh plane.

    ``stick_index`` is the first stick; the corner is cut by a stick in
    direction ``cut`` of length ``leg_length``.
    """

    stick_index: int
    x_leg: int
    y_leg: int
    leg_length: int
    cut: tuple[str, int]

    def as_dict(self) -> dict:
        return {
            "stick_index": self.stick_index,
            "x_leg": self.x_leg,
            "y_leg": self.y_leg,
            "leg_length": self.leg_length,
            "cut": list(self.cut),
        }


def _corner_cut(p: Polygon, i: int, xy_only: bool) -> Optional[tuple[str, int]]:
    n = len(p.sticks)
    s, t = p.sticks[i], p.sticks[(i + 1) % n]
    if "w" in (s.dir, t.dir) or s.dir == t.dir:
        return None
    if xy_only and {s.dir, t.dir} != {"x", "y"}:
        return None
    u, v = _travel(SH, s), _travel(SH, t)
    return _PLANAR_UNITS.get((u[0] + v[0], u[1] + v[1], 0))


def _corner_sites(p: Polygon, xy_only: bool = True):
    n = len(p.sticks)
    for i in range(n):
        cut = _corner_cut(p, i, xy_only)
        if cut is None:
            continue
        s, t = p.sticks[i], p.sticks[(i + 1) % n]
        c = min(abs(s.length), abs(t.length))
        xi, yi = (i, (i + 1) % n) if s.dir == "x" else ((i + 1) % n, i)
        yield CornerSite(i, xi, yi, c, cut)


def _corner_window(p: Polygon, site: CornerSite, length: int):
    offs = _stick_edge_offsets(p)
    corner = offs[site.stick_index + 1]
    return corner - length, 2 * length, [site.cut] * length


def find_reducible_corner(p: Polygon, equal_legs: bool = False) -> Optional[CornerSite]:
    """First xy corner whose cutting triangle is free of the rest of the polygon.

    The triangle uses the shorter leg.  With ``equal_legs`` only corners
    whose two legs have the same length are considered.
    """
    if p.lattice != SH:
        raise MoveError("corners are cut in the sh lattice")
    p = _prepared(p)
    for site in _corner_sites(p):
        if equal_legs and abs(p.sticks[site.x_leg].length) != abs(p.sticks[site.y_leg].length):
            continue
        start, count, new = _corner_window(p, site, site.leg_length)
        if not _replace(p, start, count, new).obstructions:
            return site
    return None


def corner_to_z(p: Polygon, site: CornerSite) -> MoveOutcome:
    """Replace the two legs of a corner (their first ``leg_length`` units) by one stick."""
    p = _prepared(p)
    cut = _corner_cut(p, site.stick_index, xy_only=False)
    if cut is None or cut != site.cut:
        raise MoveError(f"no corner at stick {site.stick_index}")
    n = len(p.sticks)
    s, t = p.sticks[site.stick_index], p.sticks[(site.stick_index + 1) % n]
    if site.leg_length > min(abs(s.length), abs(t.length)) or site.leg_length < 1:
        raise MoveError("leg length exceeds the corner's sticks")
    start, count, new = _corner_window(p, site, site.leg_length)
    rep = _replace(p, start, count, new)
    if rep.obstructions:
        raise ObstructedTriangle(f"triangle at stick {site.stick_index} meets {list(rep.obstructions)}")
    return _outcome(p, rep.result, MoveTag.CORNER_TO_Z, site.as_dict())


def unit_corner_bevel(p: Polygon, xy_only: bool = True) -> MoveOutcome:
    """Cut a unit triangle off a 60 degree corner; the edge length drops by one.

    A unit triangle holds no lattice points besides its corners, so the
    first corner found is always cut.  Without ``xy_only`` corners between
    any two planar directions qualify.
    """
    if p.lattice != SH:
        raise MoveError("bevels are cut in the sh lattice")
    p = _prepared(p)
    for site in _corner_sites(p, xy_only=xy_only):
        unit = CornerSite(site.stick_index, site.x_leg, site.y_leg, 1, site.cut)
        start, count, new = _corner_window(p, unit, 1)
        rep = _replace(p, start, count, new)
        if rep.obstructions:  # pragma: no cover - cannot happen for unit legs
            raise MoveError("unit triangle obstructed")
        return _outcome(p, rep.result, MoveTag.BEVEL, unit.as_dict())
    raise NoXYCorner("no 60 degree xy corner; rotate the polygon first")


def bevel_any_rotation(p: Polygon) -> MoveOutcome:
    """unit_corner_bevel after the first planar rotation that exposes an xy corner."""
    for k in range(6):
        q = p if k == 0 else apply_symmetry(p, planar_rotation(k))
        try:
            out = unit_corner_bevel(q)
        except NoXYCorner:
            continue
        out.site["rotation"] = k
        return out
    raise NoXYCorner("no rotation exposes a 60 degree corner")


# ---------------------------------------------------------------------------
# R-moves


def _perpendicular(lattice: str, d1: str, d2: str) -> bool:
    u, v = UNIT[lattice][d1], UNIT[lattice][d2]
    return sum(a * b for a, b in zip(u, v)) == 0 and d1 != d2


def r_move(p: Polygon, s_index: int, t_index: int) -> MoveOutcome:
    """Swap two adjacent perpendicular sticks across the rectangle they span.

    Perpendicularity is judged in basis coefficients, which for the sh
    lattice is the cubic view through T.
    """
    p = _prepared(p)
    n = len(p.sticks)
    s_index %= n
    t_index %= n
    if t_index == (s_index + 1) % n:
        first = s_index
    elif s_index == (t_index + 1) % n:
        first = t_index
    else:
        raise NotAdjacent(f"sticks {s_index} and {t_index} are not adjacent")
    s, t = p.sticks[first], p.sticks[(first + 1) % n]
    if not _perpendicular(p.lattice, s.dir, t.dir):
        raise NotPerpendicular(f"{s} and {t} are not perpendicular")
    offs = _stick_edge_offsets(p)
    start = offs[first]
    count = abs(s.length) + abs(t.length)
    gs, gt = (1 if s.length > 0 else -1), (1 if t.length > 0 else -1)
    new = [(t.dir, gt)] * abs(t.length) + [(s.dir, gs)] * abs(s.length)
    rep = _replace(p, start, count, new)
    if rep.obstructions:
        raise RectangleObstructed(f"rectangle meets {list(rep.obstructions)}")
    return _outcome(p, rep.result, MoveTag.R_MOVE, {"s_index": first, "t_index": (first + 1) % n})


# ---------------------------------------------------------------------------
# squares of replacement


@dataclass(frozen=True)
class Obstruction:
    stick_index: int
    kind: str  # "w", "planar" or "z"
    point: tuple[int, int, int]
    side: str  # "upper", "lower" or "diagonal"
    on_border: bool
    attached: bool


@dataclass(frozen=True)
class ReplacementSquare:
    z_index: int
    corner_lo: tuple[int, int, int]
    corner_hi: tuple[int, int, int]
    side_length: int
    obstructions: tuple[Obstruction, ...]
    other_z: tuple[Obstruction, ...]

    @property
    def w_obstructions(self) -> tuple[Obstruction, ...]:
        return tuple(o for o in self.obstructions if o.kind == "w" and not o.attached)

    @property
    def planar_obstructions(self) -> tuple[Obstruction, ...]:
        return tuple(o for o in self.obstructions if o.kind == "planar" and not o.attached)

    @property
    def empty(self) -> bool:
        return not self.w_obstructions and not self.planar_obstructions and not self.other_z


def _stick_points(start, s: Stick, lattice) -> list:
    u = UNIT[lattice][s.dir]
    g = 1 if s.length > 0 else -1
    return [
        (start[0] + g * k * u[0], start[1] + g * k * u[1], start[2] + g * k * u[2])
        for k in range(abs(s.length) + 1)
    ]


def find_replacement_square(p: Polygon, z_index: int) -> ReplacementSquare:
    """Axis-parallel square (in the cubic view) with the z-stick as its diagonal."""
    if p.lattice != SH:
        raise MoveError("squares of replacement live in the sh lattice")
    n = len(p.sticks)
    z_index %= n
    if p.sticks[z_index].dir != "z":
        raise NotAZStick(f"stick {z_index} is {p.sticks[z_index].dir}, not z")
    vs = vertices(p)
    P, Q = vs[z_index], vs[z_index + 1]
    level = P[2]
    lo = (min(P[0], Q[0]), min(P[1], Q[1]), level)
    hi = (max(P[0], Q[0]), max(P[1], Q[1]), level)
    diag = P[0] + P[1]

    def inside(q) -> bool:
        return lo[0] <= q[0] <= hi[0] and lo[1] <= q[1] <= hi[1]

    def side(q) -> str:
        s = q[0] + q[1]
        return "upper" if s > diag else "lower" if s < diag else "diagonal"

    def border(q) -> bool:
        return q[0] in (lo[0], hi[0]) or q[1] in (lo[1], hi[1])

    prev_i, next_i = (z_index - 1) % n, (z_index + 1) % n
    obstructions, other_z = [], []
    for i, s in enumerate(p.sticks):
        if i == z_index:
            continue
        attached = i in (prev_i, next_i)
        if s.dir == "w":
            c0, c1 = sorted((vs[i][2], vs[i + 1][2]))
            q = (vs[i][0], vs[i][1], level)
            if c0 <= level <= c1 and inside(q):
                obstructions.append(Obstruction(i, "w", q, side(q), border(q), attached and q in (P, Q)))
            continue
        if vs[i][2] != level:
            continue
        pts = [q for q in _stick_points(vs[i], s, SH) if inside(q)]
        if not pts:
            continue
        if attached:
            pts_free = [q for q in pts if q not in (P, Q)]
            only_end = not pts_free
        else:
            pts_free, only_end = pts, False
        q = pts_free[0] if pts_free else pts[0]
        ob = Obstruction(i, "z" if s.dir == "z" else "planar", q, side(q), border(q), attached and only_end)
        if s.dir == "z":
            other_z.append(ob)
        else:
            obstructions.append(ob)
    return ReplacementSquare(z_index, lo, hi, abs(p.sticks[z_index].length), tuple(obstructions), tuple(other_z))


def _staircases(c: int, max_sticks: int = 4):
    """Monotone x/y routes for the displacement c*(y - x), as stick lists."""
    g = 1 if c > 0 else -1
    m = abs(c)
    X = lambda k: ("x", -g * k)
    Y = lambda k: ("y", g * k)
    routes = [[X(m), Y(m)], [Y(m), X(m)]]
    if max_sticks >= 3:
        for a in range(1, m):
            routes.append([X(a), Y(m), X(m - a)])
            routes.append([Y(a), X(m), Y(m - a)])
    if max_sticks >= 4:
        for a, b in product(range(1, m), repeat=2):
            routes.append([X(a), Y(b), X(m - a), Y(m - b)])
            routes.append([Y(a), X(b), Y(m - a), X(m - b)])
    return routes


def _sticks_to_edges(sticks) -> list[Edge]:
    out = []
    for d, k in sticks:
        out.extend([(d, 1 if k > 0 else -1)] * abs(k))
    return out


def _best_route(p: Polygon, z_index: int, max_sticks: int):
    n = len(p.sticks)
    offs = _stick_edge_offsets(p)
    prev_i, next_i = (z_index - 1) % n, (z_index + 1) % n
    z = p.sticks[z_index]
    take_prev = p.sticks[prev_i].dir != "w" and n > 3
    take_next = p.sticks[next_i].dir != "w" and n > 3 and next_i != prev_i
    first = prev_i if take_prev else z_index
    start = offs[first]
    head = [(p.sticks[prev_i].dir, p.sticks[prev_i].length)] if take_prev else []
    tail = [(p.sticks[next_i].dir, p.sticks[next_i].length)] if take_next else []
    count = abs(z.length) + sum(abs(k) for _, k in head + tail)
    best = None
    for route in _staircases(z.length, max_sticks):
        new = _sticks_to_edges(head + route + tail)
        try:
            rep = _replace(p, start, count, new)
        except MoveError:
            continue
        if rep.obstructions:
            continue
        q = rep.result
        key = (len(q.sticks), edge_length(q))
        if best is None or key < best[0]:
            best = (key, q, route)
    return best


def z_replace(p: Polygon, z_index: int) -> MoveOutcome:
    """Trade a z-stick for x- and y-sticks routed through its square of replacement.

    Routes with two, three and four sticks are tried; when the best route
    costs more than one extra stick the polygon is also tried at twice the
    scale, which opens routes between obstructions on lattice points.
    """
    if p.lattice != SH:
        raise MoveError("z_replace works in the sh lattice")
    p = _prepared(p)
    n = len(p.sticks)
    z_index %= n
    sq = find_replacement_square(p, z_index)
    if sq.other_z:
        raise OtherZInSquare(f"z-sticks {[o.stick_index for o in sq.other_z]} meet the square")
    best = _best_route(p, z_index, 4)
    scaled = False
    if best is None or len(best[1].sticks) - n > 1:
        p2 = scale(p, 2)
        cand = _best_route(p2, z_index, 4)
        if cand is not None and (best is None or cand[0][0] < best[0][0]):
            best, scaled = cand, True
    n_w = len(sq.w_obstructions)
    if best is None:
        if n_w >= 3:
            raise PCaseUnresolvable(f"{n_w} w-sticks block every route through the square")
        raise SquareObstructed(f"no route through the square of stick {z_index}")
    _, q, route = best
    site = {
        "z_index": z_index,
        "w_obstructions": n_w,
        "planar_obstructions": len(sq.planar_obstructions),
        "scaled": scaled,
        "route": [f"{d}^{k}" for d, k in route],
    }
    return _outcome(p, q, MoveTag.Z_REPLACE, site)


def eliminate_z(p: Polygon) -> tuple[Polygon, list[MoveOutcome]]:
    """Apply z_replace until no z-sticks remain (or none can be replaced)."""
    cur = normalize(p)
    trace = []
    while True:
        zs = [i for i, s in enumerate(cur.sticks) if s.dir == "z"]
        if not zs:
            return cur, trace
        for i in zs:
            try:
                out = z_replace(cur, i)
            except MoveError:
                continue
            trace.append(out)
            cur = out.result
            break
        else:
            return cur, trace


# ---------------------------------------------------------------------------
# squeeze and reduce (cubic -> sh with one stick fewer)


def _cubic_corner_candidates(p: Polygon):
    """Corners whose legs run +x and +y away from the shared vertex."""
    n = len(p.sticks)
    vs = vertices(p)
    for i in range(n):
        s, t = p.sticks[i], p.sticks[(i + 1) % n]
        # leg directions seen from the corner vertex
        legs = {s.dir: -s.length, t.dir: t.length}
        if set(legs) != {"x", "y"} or legs["x"] <= 0 or legs["y"] <= 0:
            continue
        yield i, vs[i + 1], legs["x"], legs["y"]


def _stretch(p: Polygon, axis: int, threshold: int, amount: int) -> Polygon:
    vs = vertices(p)
    moved = []
    for q in vs:
        q = list(q)
        if q[axis] > threshold:
            q[axis] += amount
        moved.append(tuple(q))
    return _from_vertices(p.lattice, moved)


def _from_vertices(lattice: str, vs: list) -> Polygon:
    """Cubic polygon through the given vertex cycle (consecutive ones axis-aligned)."""
    sticks = []
    for a, b in zip(vs, vs[1:]):
        d = [b[k] - a[k] for k in range(3)]
        nz = [k for k in range(3) if d[k]]
        if len(nz) != 1:
            raise MoveError("vertices are not axis-aligned neighbours")
        k = nz[0]
        sticks.append(Stick("xyz"[k], d[k]))
    return Polygon(lattice, tuple(sticks), vs[0])


def _triangle_obstructions(p: Polygon, V, c: int) -> list:
    pts = set(lattice_points(p))
    out = []
    for i in range(1, c + 1):
        for j in range(1, c + 1 - i):
            q = (V[0] + i, V[1] + j, V[2])
            if q in pts:
                out.append(q)
    # the third side, excluding the leg ends
    for i in range(1, c):
        q = (V[0] + i, V[1] + c - i, V[2])
        if q in pts and q not in out:
            out.append(q)
    return out


def _squeeze(p: Polygon, V, c: int, px: int) -> Polygon:
    """Compress the band 0 < y - V_y < c towards its top and scale by c."""
    vs = vertices(p)
    out = []
    for q in vs:
        x, y, z = q[0] - V[0], q[1] - V[1], q[2] - V[2]
        if 0 < y < c:
            ny = c * (c - px) + px * y
        else:
            ny = c * y
        out.append((c * x + V[0], ny + V[1], c * z + V[2]))
    return _from_vertices(p.lattice, out)


def squeeze_and_reduce(p: Polygon) -> MoveOutcome:
    """Cubic polygon to an sh polygon with one stick fewer.

    A corner with legs along +x and +y is found (after a proper rotation),
    its legs are made equal by stretching, the triangle they span is
    cleared by squeezing the band it sits in, and after T the corner is
    cut by a single z-stick.
    """
    if p.lattice != CUBIC:
        raise MoveError("squeeze_and_reduce takes a cubic polygon")
    p = _prepared(p)
    candidates = []
    for gi, g in enumerate(symmetries(CUBIC, proper_only=True)):
        q = apply_symmetry(p, g)
        for i, V, a, b in _cubic_corner_candidates(q):
            if a < b:
                r = _stretch(q, 0, V[0], b - a)
            elif b < a:
                r = _stretch(q, 1, V[1], a - b)
            else:
                r = q
            c = max(a, b)
            obs = _triangle_obstructions(r, V, c)
            candidates.append((len(obs), c, i, gi, r, V, obs))
    candidates.sort(key=lambda t: t[:4])
    for n_obs, c, i, gi, r, V, obs in candidates:
        if obs:
            px = min(o[0] - V[0] for o in obs)
            r2 = _squeeze(r, V, c, px)
            c2 = c * c
        else:
            r2, c2 = r, c
        if not validate(r2).ok:
            continue
        sh = apply_T(r2)
        cut = _corner_cut(sh, i, xy_only=True)
        if cut is None:
            continue
        j = (i + 1) % len(sh.sticks)
        xi, yi = (i, j) if sh.sticks[i].dir == "x" else (j, i)
        site = CornerSite(i, xi, yi, c2, cut)
        try:
            out = corner_to_z(sh, site)
        except MoveError:
            continue
        info = {"rotation": gi, "corner": i, "legs": c, "obstructions": n_obs}
        return _outcome(p, out.result, MoveTag.SQUEEZE, info)
    raise CornerSelectionFailed("no corner of any rotation could be reduced")
