"""Knot diagrams from lattice polygons, Alexander polynomial and classification.

A polygon is projected along its vertical axis (``w`` in the sh lattice,
``z`` in the cubic lattice).  When that projection is not generic the
vertical axis is tilted by a small rational shear taken from a fixed
schedule, so the resulting diagram is reproducible.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .laurent import LaurentPoly, int_det, interpolate
from .lattice import SH, Polygon, is_closed, validate, vertices

# crossing-count threshold below which a trivial Alexander polynomial certifies the unknot
UNKNOT_CROSSING_THRESHOLD = 10
BRACKET_CAP = 12

_PRIMES = (7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71)
# vertical first, then 16 shears
SHEAR_SCHEDULE = ((Fraction(0), Fraction(0)),) + tuple(
    (Fraction(1, _PRIMES[i]), Fraction(1, _PRIMES[i + 1])) for i in range(16)
)


class KnotIdError(Exception):
    pass


class DegeneracyUnresolved(KnotIdError):
    pass


class InconsistentDiagram(KnotIdError):
    pass


@dataclass(frozen=True)
class Crossing:
    over_strand: tuple[int, Fraction]
    under_strand: tuple[int, Fraction]
    sign: int
    planar_point: tuple[Fraction, Fraction]


@dataclass(frozen=True)
class Diagram:
    """Knot diagram.

    ``gauss`` lists passages in traversal order as ``(label, +1 over / -1 under)``;
    ``signs`` maps label to crossing sign; ``pd`` holds one 4-tuple per crossing
    starting at the incoming under-edge and running anticlockwise.
    """

    crossings: tuple[Crossing, ...]
    gauss: tuple[tuple[int, int], ...]
    signs: tuple[int, ...]
    pd: tuple[tuple[int, int, int, int], ...]
    shear: tuple[Fraction, Fraction] = (Fraction(0), Fraction(0))

    @property
    def crossing_number(self) -> int:
        return len(self.pd)

    def gauss_text(self) -> str:
        return ", ".join(str(lbl * ou) for lbl, ou in self.gauss)

    def pd_text(self) -> str:
        return " ".join("X({},{},{},{})".format(*x) for x in self.pd)

    def writhe(self) -> int:
        return sum(self.signs)


class KnotTag(str, Enum):
    UNKNOT = "unknot"
    K3_1 = "3_1"
    K4_1 = "4_1"
    K5_1 = "5_1"
    K5_2 = "5_2"
    UNKNOWN = "unknown"


REFERENCE_ALEXANDER = {
    KnotTag.UNKNOT: LaurentPoly.from_list([1]),
    KnotTag.K3_1: LaurentPoly.from_list([1, -1, 1]),
    KnotTag.K4_1: LaurentPoly.from_list([1, -3, 1]),
    KnotTag.K5_1: LaurentPoly.from_list([1, -1, 1, -1, 1]),
    KnotTag.K5_2: LaurentPoly.from_list([2, -3, 2]),
}


@dataclass(frozen=True)
class KnotType:
    tag: KnotTag
    determinant: int
    alexander: LaurentPoly
    crossings: int
    caveat: Optional[str] = None

    def __str__(self) -> str:
        return self.tag.value


# ---------------------------------------------------------------------------
# diagrams from explicit codes


def _pd_from_gauss(gauss, signs) -> tuple:
    """Planar diagram code from a signed Gauss code.

    Edge k (1-based) leaves passage k-1 and enters passage k, wrapping.
    """
    m = len(gauss)
    if m == 0:
        return ()
    incoming = {}
    for idx, (lbl, ou) in enumerate(gauss):
        edge_in = idx + 1
        edge_out = (idx + 1) % m + 1
        incoming.setdefault(lbl, {})[ou] = (edge_in, edge_out)
    pd = []
    for lbl in sorted(incoming):
        under_in, under_out = incoming[lbl][-1]
        over_in, over_out = incoming[lbl][1]
        if signs[lbl] > 0:
            pd.append((under_in, over_out, under_out, over_in))
        else:
            pd.append((under_in, over_in, under_out, over_out))
    return tuple(pd)


def diagram_from_gauss(gauss: Sequence[tuple[int, int]], signs: dict[int, int]) -> Diagram:
    gauss, sign_list = _relabel(gauss, signs)
    return Diagram((), gauss, sign_list, _pd_from_gauss(gauss, sign_list))


def _relabel(gauss, signs):
    order = []
    for lbl, _ in gauss:
        if lbl not in order:
            order.append(lbl)
    new = {lbl: i for i, lbl in enumerate(order)}
    g = tuple((new[lbl], ou) for lbl, ou in gauss)
    s = tuple(signs[lbl] for lbl in order)
    return g, s


def _pd_sign(x, n_edges: int) -> int:
    _, j, _, l = x
    # over strand runs from l to j when j follows l
    if (j - l) % n_edges == 1:
        return 1
    if (l - j) % n_edges == 1:
        return -1
    raise InconsistentDiagram(f"over strand edges of {x} are not consecutive")


def diagram_from_pd(pd: Sequence[tuple[int, int, int, int]]) -> Diagram:
    """Wrap a PD code (edges 1..2n, consecutive along the knot)."""
    pd = tuple(tuple(x) for x in pd)
    n_edges = 2 * len(pd)
    labels = sorted(e for x in pd for e in x)
    if labels != sorted(list(range(1, n_edges + 1)) * 2):
        raise InconsistentDiagram("every edge label must appear exactly twice")
    signs = tuple(_pd_sign(x, n_edges) if n_edges > 2 else 1 for x in pd)
    # passages: under passage enters through x[0]; over passage enters through the lower over edge
    passage = {}
    for c, x in enumerate(pd):
        passage[x[0]] = (c, -1)
        over_in = x[3] if signs[c] > 0 else x[1]
        passage[over_in] = (c, 1)
    gauss = tuple(passage[e] for e in range(1, n_edges + 1))
    return Diagram((), gauss, signs, pd)


# ---------------------------------------------------------------------------
# Reidemeister simplification on signed Gauss codes


def simplify_gauss(gauss, signs):
    """Remove R1 kinks and R2 bigons until none remain."""
    g = list(gauss)
    s = dict(enumerate(signs)) if not isinstance(signs, dict) else dict(signs)
    changed = True
    while changed and g:
        changed = False
        m = len(g)
        # R1: both passages of a crossing adjacent
        for i in range(m):
            if g[i][0] == g[(i + 1) % m][0]:
                lbl = g[i][0]
                g = [p for p in g if p[0] != lbl]
                changed = True
                break
        if changed:
            continue
        # R2: two crossings adjacent twice, one strand over both, other under both
        pos = {}
        for i, (lbl, ou) in enumerate(g):
            pos.setdefault(lbl, []).append(i)
        for i in range(m):
            a, b = g[i], g[(i + 1) % m]
            if a[1] != b[1] or s[a[0]] == s[b[0]]:
                continue
            ia = [k for k in pos[a[0]] if k != i][0]
            ib = [k for k in pos[b[0]] if k != (i + 1) % m][0]
            if (ia + 1) % m == ib or (ib + 1) % m == ia:
                drop = {a[0], b[0]}
                g = [p for p in g if p[0] not in drop]
                changed = True
                break
    return g, {lbl: s[lbl] for lbl, _ in g}


def reduce_diagram(d: Diagram) -> Diagram:
    raw_signs = dict(enumerate(d.signs))
    g, s = simplify_gauss(d.gauss, raw_signs)
    gauss, sign_list = _relabel(g, s)
    return Diagram(d.crossings, gauss, sign_list, _pd_from_gauss(gauss, sign_list), d.shear)


# ---------------------------------------------------------------------------
# projection


def _planar_coords(p: Polygon):
    out = []
    for a, b, c in vertices(p):
        if p.lattice == SH:
            out.append((2 * a + b, b, c))
        else:
            out.append((a, b, c))
    return out


def _cross2(ax, ay, bx, by):
    return ax * by - ay * bx


def _try_project(p: Polygon, shear) -> Optional[Diagram]:
    """Diagram for one shear, or None when that projection is not generic.

    The shear is cleared of denominators so every test runs on integers;
    rationals appear only at the (few) crossings.
    """
    e1, e2 = shear
    D = e1.denominator * e2.denominator
    k1, k2 = int(e1 * D), int(e2 * D)
    pts3 = _planar_coords(p)
    proj = [(D * x - k1 * c, D * y - k2 * c) for x, y, c in pts3]
    n = len(p.sticks)
    segs = []
    for i in range(n):
        (x0, y0), (x1, y1) = proj[i], proj[i + 1]
        if x0 == x1 and y0 == y1:
            return None
        segs.append((x0, y0, x1 - x0, y1 - y0))
    events: dict[int, list] = {i: [] for i in range(n)}
    crossings = []
    points_seen = set()
    for i in range(n):
        px, py, rx, ry = segs[i]
        for j in range(i + 1, n):
            qx, qy, sx, sy = segs[j]
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            wx, wy = qx - px, qy - py
            d = rx * sy - ry * sx
            if d == 0:
                if wx * ry - wy * rx != 0:
                    continue  # parallel, distinct lines
                if adjacent:
                    # collinear neighbours overlap unless they continue straight on
                    if rx * sx + ry * sy < 0:
                        return None
                    continue
                rr = rx * rx + ry * ry
                t0 = wx * rx + wy * ry
                t1 = t0 + sx * rx + sy * ry
                if max(t0, t1) >= 0 and min(t0, t1) <= rr:
                    return None
                continue
            if adjacent:
                continue  # non-parallel neighbours meet only at their shared vertex
            tn = wx * sy - wy * sx
            un = wx * ry - wy * rx
            if d < 0:
                d, tn, un = -d, -tn, -un
            if tn < 0 or tn > d or un < 0 or un > d:
                continue
            if tn in (0, d) or un in (0, d):
                return None  # projection through a vertex
            t = Fraction(tn, d)
            u = Fraction(un, d)
            pt = (px + t * rx, py + t * ry)
            if pt in points_seen:
                return None  # triple point
            points_seen.add(pt)
            hi = pts3[i][2] + t * (pts3[i + 1][2] - pts3[i][2])
            hj = pts3[j][2] + u * (pts3[j + 1][2] - pts3[j][2])
            if hi == hj:
                raise InconsistentDiagram("polygon is not embedded")
            if hi > hj:
                over, under, to, tu = i, j, t, u
            else:
                over, under, to, tu = j, i, u, t
            do, du = segs[over], segs[under]
            sign = 1 if _cross2(do[2], do[3], du[2], du[3]) > 0 else -1
            label = len(crossings)
            crossings.append(Crossing((over, to), (under, tu), sign, (pt[0] / D, pt[1] / D)))
            events[over].append((to, label, 1))
            events[under].append((tu, label, -1))
    gauss = []
    for i in range(n):
        for _, label, ou in sorted(events[i]):
            gauss.append((label, ou))
    signs = tuple(c.sign for c in crossings)
    gauss_t, sign_t = _relabel(gauss, dict(enumerate(signs)))
    order = []
    for lbl, _ in gauss:
        if lbl not in order:
            order.append(lbl)
    crossings_sorted = tuple(crossings[lbl] for lbl in order)
    return Diagram(crossings_sorted, gauss_t, sign_t, _pd_from_gauss(gauss_t, sign_t), shear)


def project(p: Polygon, schedule: Sequence = SHEAR_SCHEDULE) -> Diagram:
    """Generic projection of a closed embedded polygon along its vertical axis."""
    if not is_closed(p):
        raise KnotIdError("polygon is not closed")
    for shear in schedule:
        d = _try_project(p, shear)
        if d is not None:
            return d
    raise DegeneracyUnresolved("no generic projection in the shear schedule")


# ---------------------------------------------------------------------------
# Alexander polynomial


def _arcs(pd, n_edges):
    parent = list(range(n_edges + 1))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x in pd:
        ra, rb = find(x[1]), find(x[3])
        if ra != rb:
            parent[ra] = rb
    roots = {}
    arc_of = {}
    for e in range(1, n_edges + 1):
        r = find(e)
        arc_of[e] = roots.setdefault(r, len(roots))
    return arc_of, len(roots)


def alexander_matrix_rows(d: Diagram):
    """Rows (one per crossing) as dict arc -> (const, t-coefficient)."""
    pd = d.pd
    n_edges = 2 * len(pd)
    arc_of, n_arcs = _arcs(pd, n_edges)
    if n_arcs != len(pd):
        raise InconsistentDiagram(f"{len(pd)} crossings but {n_arcs} arcs")
    rows = []
    for x, sign in zip(pd, d.signs):
        k = arc_of[x[1]]
        i = arc_of[x[0]]
        j = arc_of[x[2]]
        row = {}

        def put(col, c0, c1):
            a, b = row.get(col, (0, 0))
            row[col] = (a + c0, b + c1)

        put(k, 1, -1)
        if sign > 0:
            put(i, 0, 1)
            put(j, -1, 0)
        else:
            put(i, -1, 0)
            put(j, 0, 1)
        rows.append(row)
    return rows, n_arcs


def alexander(d: Diagram) -> LaurentPoly:
    """Normalised Alexander polynomial of a knot diagram."""
    n = len(d.pd)
    if n == 0:
        return LaurentPoly.const(1)
    rows, n_arcs = alexander_matrix_rows(d)
    m = n - 1
    if m == 0:
        return LaurentPoly.const(1)
    xs = list(range(-(m // 2), m + 1 - (m // 2)))
    ys = []
    for tv in xs:
        mat = []
        for r in range(m):
            row = rows[r]
            mat.append([row.get(c, (0, 0))[0] + row.get(c, (0, 0))[1] * tv for c in range(m)])
        ys.append(int_det(mat))
    poly = interpolate(xs, ys)
    if poly.is_zero():
        raise InconsistentDiagram("Alexander matrix minor vanishes")
    return poly.normalized()


def determinant(d: Diagram) -> int:
    return abs(alexander(d)(-1))


# ---------------------------------------------------------------------------
# Kauffman bracket (audit path)


def kauffman_bracket(d: Diagram, cap: int = BRACKET_CAP) -> LaurentPoly:
    """State-sum bracket in the variable A; exponential, capped at *cap* crossings."""
    pd = d.pd
    n = len(pd)
    if n > cap:
        raise KnotIdError(f"bracket capped at {cap} crossings, diagram has {n}")
    if n == 0:
        return LaurentPoly.const(1)
    loop = LaurentPoly({2: -1, -2: -1})
    total = LaurentPoly()
    n_edges = 2 * n
    for state in range(1 << n):
        parent = list(range(n_edges + 1))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        n_a = 0
        for c, (a, b, cc, dd) in enumerate(pd):
            if state >> c & 1:
                union(a, dd)
                union(b, cc)
            else:
                n_a += 1
                union(a, b)
                union(cc, dd)
        loops = len({find(e) for e in range(1, n_edges + 1)})
        total = total + LaurentPoly.monomial(n_a - (n - n_a)) * (loop ** (loops - 1))
    return total


def jones(d: Diagram, cap: int = BRACKET_CAP) -> LaurentPoly:
    """Jones polynomial in ``t`` (returned with exponents of t)."""
    br = kauffman_bracket(d, cap)
    w = d.writhe()
    f = br * LaurentPoly.monomial(-3 * w, (-1) ** (w % 2))
    out = {}
    for k, v in f.coeffs.items():
        if k % 4:
            raise InconsistentDiagram("bracket exponents not divisible by 4")
        out[-k // 4] = v
    return LaurentPoly(out)


REFERENCE_JONES = {
    KnotTag.UNKNOT: {LaurentPoly.const(1)},
    KnotTag.K3_1: {LaurentPoly({1: 1, 3: 1, 4: -1}), LaurentPoly({-1: 1, -3: 1, -4: -1})},
    KnotTag.K4_1: {LaurentPoly({-2: 1, -1: -1, 0: 1, 1: -1, 2: 1})},
}
_J51 = LaurentPoly({-2: 1, -4: 1, -5: -1, -6: 1, -7: -1})
_J52 = LaurentPoly({-1: 1, -2: -1, -3: 2, -4: -1, -5: 1, -6: -1})
for _tag, _j in ((KnotTag.K5_1, _J51), (KnotTag.K5_2, _J52)):
    # both chiralities
    REFERENCE_JONES[_tag] = {_j, LaurentPoly({-k: v for k, v in _j.coeffs.items()})}


# ---------------------------------------------------------------------------
# classification


def _match(poly: LaurentPoly) -> Optional[KnotTag]:
    for tag, ref in REFERENCE_ALEXANDER.items():
        if poly == ref:
            return tag
    return None


def _audit_selected(p: Polygon) -> bool:
    h = hashlib.sha256(str(p).encode()).digest()
    return h[0] * 256 + h[1] < 655  # about 1%


@lru_cache(maxsize=4096)
def classify(p: Polygon, audit: bool = True) -> KnotType:
    """Identify the knot type of a closed embedded polygon among the reference set."""
    return identify(p, audit=audit, check=True)


def identify(p: Polygon, audit: bool = True, check: bool = True) -> KnotType:
    """Uncached classification; ``check=False`` skips the embedding check for trusted input."""
    if check:
        rep = validate(p)
        if not rep.ok:
            raise KnotIdError(f"invalid polygon: {rep}")
    d = reduce_diagram(project(p))
    poly = alexander(d)
    tag = _match(poly)
    caveat = None
    if tag == KnotTag.UNKNOT and d.crossing_number > UNKNOT_CROSSING_THRESHOLD:
        # look for a projection with fewer crossings before giving up
        best = d
        for k in range(1, len(SHEAR_SCHEDULE)):
            try:
                cand = reduce_diagram(project(p, SHEAR_SCHEDULE[k:]))
            except DegeneracyUnresolved:
                break
            if cand.crossing_number < best.crossing_number:
                best = cand
        d = best
        if d.crossing_number > UNKNOT_CROSSING_THRESHOLD:
            tag = KnotTag.UNKNOWN
            caveat = "AlexanderTrivialHighCrossing"
    if tag is None:
        tag = KnotTag.UNKNOWN
    if audit and (tag == KnotTag.UNKNOWN or caveat or _audit_selected(p)):
        if d.crossing_number <= BRACKET_CAP and tag in REFERENCE_JONES:
            if jones(d) not in REFERENCE_JONES[tag]:
                caveat = (caveat + ";" if caveat else "") + "JonesMismatch"
    det = abs(poly(-1))
    return KnotType(tag, det, poly, d.crossing_number, caveat)


def classify_tag(p: Polygon) -> KnotTag:
    return classify(p).tag
