"""Lattice polygons in the cubic and simple hexagonal (sh) lattices.

Points are stored as integer basis coefficients ``(a, b, c)``.  For the sh
lattice the basis is ``x, y, w`` with the planar diagonal ``z = y - x``; for
the cubic lattice it is the usual ``x, y, z``.  Both coordinate systems are
orientation-preserving linear images of Euclidean space, so every
incidence and crossing question can be answered in exact integers.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Iterable, NamedTuple, Optional, Sequence

CUBIC = "cubic"
SH = "sh"
LATTICES = (CUBIC, SH)


class Direction(str, Enum):
    X = "x"
    Y = "y"
    Z = "z"
    W = "w"


DIR_ORDER = {"x": 0, "y": 1, "z": 2, "w": 3}
LEGAL_DIRS = {CUBIC: ("x", "y", "z"), SH: ("x", "y", "z", "w")}

UNIT = {
    CUBIC: {"x": (1, 0, 0), "y": (0, 1, 0), "z": (0, 0, 1)},
    SH: {"x": (1, 0, 0), "y": (0, 1, 0), "z": (-1, 1, 0), "w": (0, 0, 1)},
}

# direction that moves between horizontal levels
VERTICAL = {CUBIC: "z", SH: "w"}


class LatticeError(ValueError):
    pass


class WordSyntaxError(LatticeError):
    def __init__(self, token: str, offset: int, reason: str = "malformed token"):
        super().__init__(f"{reason}: {token!r} at byte offset {offset}")
        self.token = token
        self.offset = offset


class IllegalDirection(LatticeError):
    pass


class NonMaximalPolygon(LatticeError):
    pass


class Stick(NamedTuple):
    dir: str
    length: int

    def vector(self, lattice: str) -> tuple[int, int, int]:
        u = UNIT[lattice][self.dir]
        n = self.length
        return (u[0] * n, u[1] * n, u[2] * n)

    def __str__(self) -> str:
        return f"{self.dir}^{self.length}"


LatticePoint = tuple  # (a, b, c) integers


@dataclass(frozen=True)
class Polygon:
    lattice: str
    sticks: tuple[Stick, ...]
    base: tuple[int, int, int] = (0, 0, 0)

    def __post_init__(self):
        if self.lattice not in LATTICES:
            raise LatticeError(f"unknown lattice {self.lattice!r}")
        sticks = tuple(s if isinstance(s, Stick) else Stick(*s) for s in self.sticks)
        legal = LEGAL_DIRS[self.lattice]
        for s in sticks:
            if s.dir not in legal:
                raise IllegalDirection(f"direction {s.dir!r} is not legal in the {self.lattice} lattice")
            if s.length == 0:
                raise LatticeError("stick of length 0")
        object.__setattr__(self, "sticks", sticks)
        object.__setattr__(self, "base", tuple(int(v) for v in self.base))

    def __len__(self) -> int:
        return len(self.sticks)

    @property
    def word(self) -> str:
        return format_word(self)

    def __str__(self) -> str:
        return f"{self.lattice}: {self.word}"


@dataclass(frozen=True)
class StickCounts:
    nx: int
    ny: int
    nz: int
    nw: int

    @property
    def total(self) -> int:
        return self.nx + self.ny + self.nz + self.nw

    @property
    def planar(self) -> tuple[int, int, int]:
        return (self.nx, self.ny, self.nz)


@dataclass(frozen=True)
class ValidationReport:
    closed: bool
    maximal: bool
    embedded: bool
    first_violation: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.closed and self.maximal and self.embedded


# ---------------------------------------------------------------------------
# parsing and emission

_TOKEN = re.compile(r"^([xyzwXYZW])\^([+-]?\d+)$")


def parse_word(text: str, lattice: Optional[str] = None) -> Polygon:
    """Parse a stick word, optionally preceded by ``lattice:``/``base:`` headers.

    A ``lattice:`` header takes precedence over the *lattice* argument.
    Closure is not checked here.
    """
    base = (0, 0, 0)
    header_lattice = None
    sticks = []
    offset = 0
    for line in text.splitlines(keepends=True):
        line_start = offset
        offset += len(line.encode("utf-8"))
        body = line.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        low = stripped.lower()
        if low.startswith("lattice:"):
            header_lattice = low.split(":", 1)[1].strip()
            if header_lattice not in LATTICES:
                raise LatticeError(f"unknown lattice {header_lattice!r}")
            continue
        if low.startswith("base:"):
            parts = stripped.split(":", 1)[1].split()
            if len(parts) != 3:
                raise WordSyntaxError(stripped, line_start, "base needs three integers")
            try:
                base = tuple(int(v) for v in parts)
            except ValueError:
                raise WordSyntaxError(stripped, line_start, "base needs three integers") from None
            continue
        for m in re.finditer(r"\S+", body):
            tok = m.group(0)
            tok_offset = line_start + len(body[: m.start()].encode("utf-8"))
            tm = _TOKEN.match(tok)
            if tm is None:
                raise WordSyntaxError(tok, tok_offset)
            n = int(tm.group(2))
            if n == 0:
                raise WordSyntaxError(tok, tok_offset, "zero-length stick")
            sticks.append(Stick(tm.group(1).lower(), n))
    lat = header_lattice or lattice
    if lat is None:
        raise LatticeError("lattice not given (no 'lattice:' header and no default)")
    return Polygon(lat, tuple(sticks), base)


def format_word(p: Polygon) -> str:
    return " ".join(f"{s.dir}^{s.length}" for s in p.sticks)


def to_knotw(p: Polygon, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"lattice: {p.lattice}")
    if any(p.base):
        lines.append("base: {} {} {}".format(*p.base))
    lines.append(format_word(p))
    return "\n".join(lines) + "\n"


def read_knotw(path, lattice: Optional[str] = None) -> Polygon:
    with open(path, encoding="utf-8") as fh:
        return parse_word(fh.read(), lattice)


def write_knotw(path, p: Polygon, comments: Sequence[str] = ()) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(to_knotw(p, comments))


# ---------------------------------------------------------------------------
# geometry


def _add(p, q):
    return (p[0] + q[0], p[1] + q[1], p[2] + q[2])


def _sub(p, q):
    return (p[0] - q[0], p[1] - q[1], p[2] - q[2])


def _dot(p, q):
    return p[0] * q[0] + p[1] * q[1] + p[2] * q[2]


def _cross(p, q):
    return (p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0])


def vertices(p: Polygon) -> list[tuple[int, int, int]]:
    """n+1 points for n sticks; the last equals the first iff closed."""
    pts = [p.base]
    cur = p.base
    for s in p.sticks:
        cur = _add(cur, s.vector(p.lattice))
        pts.append(cur)
    return pts


def is_closed(p: Polygon) -> bool:
    v = vertices(p)
    return v[0] == v[-1]


def is_maximal(p: Polygon, cyclic: bool = True) -> bool:
    st = p.sticks
    n = len(st)
    for i in range(n - 1):
        if st[i].dir == st[i + 1].dir:
            return False
    if cyclic and n > 1 and st[-1].dir == st[0].dir:
        return False
    return True


def uv(point) -> tuple[int, int]:
    """Integer planar coordinates of an sh point: (2a+b, b)."""
    return (2 * point[0] + point[1], point[1])


def euclidean(point, lattice: str) -> tuple[float, float, float]:
    """Floating point Euclidean embedding; for rendering only."""
    a, b, c = point
    if lattice == SH:
        return (a + b / 2.0, b * (3 ** 0.5) / 2.0, float(c))
    return (float(a), float(b), float(c))


def _embed_uvc(point, lattice):
    if lattice == SH:
        return (2 * point[0] + point[1], point[1], point[2])
    return tuple(point)


def _segment_meet(p0, d0, l0, p1, d1, l1):
    """Intersection of segments p0 + t*d0 (0<=t<=l0) and p1 + s*d1 (0<=s<=l1).

    Returns None, ("point", t, s) or ("overlap", (t_lo, t_hi)).
    All inputs are integer vectors; parameters come back as Fractions.
    """
    n = _cross(d0, d1)
    w = _sub(p1, p0)
    if n == (0, 0, 0):
        if _cross(w, d0) != (0, 0, 0):
            return None
        dd = _dot(d0, d0)
        t1 = Fraction(_dot(w, d0), dd)
        t2 = t1 + Fraction(l1 * _dot(d1, d0), dd)
        lo, hi = max(Fraction(0), min(t1, t2)), min(Fraction(l0), max(t1, t2))
        if lo > hi:
            return None
        if lo == hi:
            s = Fraction(_dot(_sub(_add(p0, tuple(lo * c for c in d0)), p1), d1), _dot(d1, d1))
            return ("point", lo, s)
        return ("overlap", (lo, hi))
    if _dot(w, n) != 0:
        return None
    nn = _dot(n, n)
    t = Fraction(_dot(_cross(w, d1), n), nn)
    s = Fraction(_dot(_cross(w, d0), n), nn)
    if 0 <= t <= l0 and 0 <= s <= l1:
        return ("point", t, s)
    return None


def _stick_segments(p: Polygon):
    segs = []
    lat = p.lattice
    for start, s in zip(vertices(p), p.sticks):
        u = UNIT[lat][s.dir]
        sign = 1 if s.length > 0 else -1
        d = _embed_uvc(tuple(sign * c for c in u), lat)
        segs.append((_embed_uvc(start, lat), d, abs(s.length)))
    return segs


def _embedding_violation(p: Polygon, closed: bool) -> Optional[str]:
    segs = _stick_segments(p)
    n = len(segs)
    for i in range(n):
        for j in range(i + 1, n):
            consecutive = j == i + 1 or (closed and i == 0 and j == n - 1 and n > 2)
            if n == 2 and closed:
                consecutive = True
            m = _segment_meet(*segs[i], *segs[j])
            if m is None:
                continue
            if m[0] == "overlap":
                return f"sticks {i} and {j} overlap"
            _, t, s = m
            if consecutive:
                li, lj = segs[i][2], segs[j][2]
                if j == i + 1 and t == li and s == 0:
                    continue
                if i == 0 and j == n - 1 and t == 0 and s == lj:
                    continue
                if n == 2 and closed and ((t == li and s == 0) or (t == 0 and s == lj)):
                    continue
            pt = tuple(segs[i][0][k] + t * segs[i][1][k] for k in range(3))
            return f"sticks {i} and {j} meet at {_fmt_pt(pt, p.lattice)}"
    return None


def _fmt_pt(pt, lattice):
    if lattice == SH:
        u, v, c = pt
        b = v
        a = (u - v) / 2
        pt = (a, b, c)
    return "(" + ", ".join(str(x) for x in pt) + ")"


def validate(p: Polygon) -> ValidationReport:
    closed = is_closed(p)
    maximal = is_maximal(p, cyclic=closed)
    violation = _embedding_violation(p, closed)
    return ValidationReport(closed, maximal, violation is None, violation)


def lattice_points(p: Polygon) -> list[tuple[int, int, int]]:
    """Every lattice point visited by the unit-step walk (closing point omitted)."""
    out = []
    cur = p.base
    lat = p.lattice
    for s in p.sticks:
        u = UNIT[lat][s.dir]
        step = 1 if s.length > 0 else -1
        d = (u[0] * step, u[1] * step, u[2] * step)
        for _ in range(abs(s.length)):
            out.append(cur)
            cur = (cur[0] + d[0], cur[1] + d[1], cur[2] + d[2])
    if cur != p.base:
        out.append(cur)
    return out


# ---------------------------------------------------------------------------
# counting


def stick_census(p: Polygon) -> StickCounts:
    if not is_maximal(p, cyclic=is_closed(p)):
        raise NonMaximalPolygon("stick census needs a maximal word")
    n = {"x": 0, "y": 0, "z": 0, "w": 0}
    for s in p.sticks:
        n[s.dir] += 1
    return StickCounts(n["x"], n["y"], n["z"], n["w"])


def edge_totals(p: Polygon) -> dict[str, int]:
    out = {d: 0 for d in LEGAL_DIRS[p.lattice]}
    for s in p.sticks:
        out[s.dir] += abs(s.length)
    return out


def edge_length(p: Polygon) -> int:
    return sum(abs(s.length) for s in p.sticks)


def _level_runs(p: Polygon):
    """Maximal cyclic runs of planar sticks with the height they sit at."""
    vert = VERTICAL[p.lattice]
    vs = vertices(p)
    n = len(p.sticks)
    if n == 0:
        return []
    if all(s.dir != vert for s in p.sticks):
        return [(vs[0][2], list(range(n)))]
    start = next(i for i, s in enumerate(p.sticks) if s.dir == vert)
    runs = []
    cur = []
    for k in range(1, n + 1):
        i = (start + k) % n
        if p.sticks[i].dir == vert:
            if cur:
                runs.append((vs[cur[0]][2], cur))
                cur = []
        else:
            cur.append(i)
    if cur:
        runs.append((vs[cur[0]][2], cur))
    return runs


def w_levels(p: Polygon) -> list[int]:
    """Distinct heights carrying planar sticks."""
    return sorted({h for h, _ in _level_runs(p)})


def properly_leveled(p: Polygon) -> bool:
    runs = _level_runs(p)
    heights = [h for h, _ in runs]
    return len(heights) == len(set(heights))


def compact_levels(p: Polygon) -> Polygon:
    """Renumber occupied heights to 0, 1, 2, ... keeping their order."""
    vs = vertices(p)
    heights = sorted({v[2] for v in vs})
    rank = {h: i for i, h in enumerate(heights)}
    vert = VERTICAL[p.lattice]
    sticks = []
    for i, s in enumerate(p.sticks):
        if s.dir == vert:
            sticks.append(Stick(vert, rank[vs[i + 1][2]] - rank[vs[i][2]]))
        else:
            sticks.append(s)
    base = (p.base[0], p.base[1], rank[p.base[2]])
    return Polygon(p.lattice, tuple(sticks), base)


# ---------------------------------------------------------------------------
# normalisation and symmetry


def normalize(p: Polygon) -> Polygon:
    """Merge cyclically adjacent same-direction sticks; drop zero-length results.

    The start vertex is kept when it is still a corner, otherwise moved to
    the start of the stick it fell into.
    """
    closed = is_closed(p)
    sticks = [list(s) for s in p.sticks]
    changed = True
    while changed:
        changed = False
        out = []
        for s in sticks:
            if out and out[-1][0] == s[0]:
                out[-1][1] += s[1]
                if out[-1][1] == 0:
                    out.pop()
                changed = True
            else:
                out.append(list(s))
        sticks = out
    base = p.base
    if closed:
        # wrap-around merges shift the start vertex backwards
        lat = p.lattice
        while len(sticks) > 1 and sticks[0][0] == sticks[-1][0]:
            last = sticks.pop()
            u = UNIT[lat][last[0]]
            base = (base[0] - u[0] * last[1], base[1] - u[1] * last[1], base[2] - u[2] * last[1])
            sticks[0][1] += last[1]
            if sticks[0][1] == 0:
                sticks.pop(0)
            # inner merges may have become possible
            return normalize(Polygon(p.lattice, tuple(Stick(d, n) for d, n in sticks), base))
    return Polygon(p.lattice, tuple(Stick(d, n) for d, n in sticks), base)


def rotate_word(p: Polygon, k: int) -> Polygon:
    """Same polygon, word started at stick k."""
    n = len(p.sticks)
    if n == 0:
        return p
    k %= n
    vs = vertices(p)
    return Polygon(p.lattice, p.sticks[k:] + p.sticks[:k], vs[k])


def reverse(p: Polygon) -> Polygon:
    vs = vertices(p)
    sticks = tuple(Stick(s.dir, -s.length) for s in reversed(p.sticks))
    return Polygon(p.lattice, sticks, vs[-1])


def translate(p: Polygon, offset) -> Polygon:
    return Polygon(p.lattice, p.sticks, _add(p.base, offset))


def scale(p: Polygon, factor: int) -> Polygon:
    return Polygon(
        p.lattice,
        tuple(Stick(s.dir, s.length * factor) for s in p.sticks),
        tuple(factor * c for c in p.base),
    )


@dataclass(frozen=True)
class Symmetry:
    """A lattice symmetry as a signed relabelling of directions."""

    lattice: str
    image: tuple  # ((dir, sign), ...) in DIR order of the lattice
    proper: bool
    name: str = ""

    def dir_map(self) -> dict[str, tuple[str, int]]:
        return dict(zip(LEGAL_DIRS[self.lattice], self.image))

    def point(self, q) -> tuple[int, int, int]:
        # basis images: cubic x,y,z ; sh x,y,w
        m = self.dir_map()
        basis = ("x", "y", "z") if self.lattice == CUBIC else ("x", "y", "w")
        out = [0, 0, 0]
        for coeff, bdir in zip(q, basis):
            d, sg = m[bdir]
            u = UNIT[self.lattice][d]
            for k in range(3):
                out[k] += coeff * sg * u[k]
        return tuple(out)


def _sh_symmetries() -> list[Symmetry]:
    # planar directions anticlockwise at 60 degree steps
    ring = [("x", 1), ("y", 1), ("z", 1), ("x", -1), ("y", -1), ("z", -1)]
    pos = {("x", 1): 0, ("y", 1): 1, ("z", 1): 2}
    out = []
    for refl, flip, rot in product((0, 1), (0, 1), range(6)):
        img = []
        for d in ("x", "y", "z"):
            k = pos[(d, 1)]
            if refl:
                k = (-k) % 6
            img.append(ring[(k + rot) % 6])
        img.append(("w", -1 if flip else 1))
        proper = (refl + flip) % 2 == 0
        out.append(Symmetry(SH, tuple(img), proper, f"r{rot}{'m' if refl else ''}{'f' if flip else ''}"))
    return out


def _cubic_symmetries() -> list[Symmetry]:
    from itertools import permutations

    out = []
    axes = ("x", "y", "z")
    for perm in permutations(range(3)):
        # permutation parity
        inv = sum(1 for i in range(3) for j in range(i + 1, 3) if perm[i] > perm[j])
        for signs in product((1, -1), repeat=3):
            det = (-1) ** inv * signs[0] * signs[1] * signs[2]
            img = tuple((axes[perm[i]], signs[i]) for i in range(3))
            out.append(Symmetry(CUBIC, img, det == 1))
    # identity first, deterministic order
    out.sort(key=lambda g: (g.image != (("x", 1), ("y", 1), ("z", 1)), not g.proper, g.image))
    return out


SYMMETRIES = {SH: _sh_symmetries(), CUBIC: _cubic_symmetries()}


def symmetries(lattice: str, proper_only: bool = False) -> list[Symmetry]:
    return [g for g in SYMMETRIES[lattice] if g.proper or not proper_only]


def apply_symmetry(p: Polygon, g: Symmetry) -> Polygon:
    m = g.dir_map()
    sticks = []
    for s in p.sticks:
        d, sg = m[s.dir]
        sticks.append(Stick(d, sg * s.length))
    return Polygon(p.lattice, tuple(sticks), g.point(p.base))


def mirror(p: Polygon) -> Polygon:
    """Reflection through the horizontal plane (vertical flip)."""
    vert = VERTICAL[p.lattice]
    sticks = tuple(Stick(s.dir, -s.length) if s.dir == vert else s for s in p.sticks)
    return Polygon(p.lattice, sticks, (p.base[0], p.base[1], -p.base[2]))


# sticks are encoded as single integers ordered like (direction, length)
_CODE_SPAN = 1 << 24
_CODE_OFF = 1 << 23
_DIR_NAMES = "xyzw"


def _code_maps(lattice: str, proper_only: bool) -> list[dict]:
    key = (lattice, proper_only)
    if key not in _CODE_MAP_CACHE:
        maps = []
        for g in symmetries(lattice, proper_only):
            m = g.dir_map()
            maps.append({d: (DIR_ORDER[nd] * _CODE_SPAN + _CODE_OFF, sg) for d, (nd, sg) in m.items()})
        _CODE_MAP_CACHE[key] = maps
    return _CODE_MAP_CACHE[key]


_CODE_MAP_CACHE: dict = {}


def canonical_key(p: Polygon, proper_only: bool = False) -> tuple:
    """Minimal encoded word over rotations, reversal and lattice symmetries."""
    sticks = p.sticks
    if not sticks:
        return ()
    seqs = []
    for m in _code_maps(p.lattice, proper_only):
        enc = [m[d][0] + m[d][1] * n for d, n in sticks]
        seqs.append(enc)
        seqs.append([m[d][0] - m[d][1] * n for d, n in reversed(sticks)])
    low = min(min(s) for s in seqs)
    best = None
    for s in seqs:
        for i, v in enumerate(s):
            if v == low:
                cand = tuple(s[i:] + s[:i])
                if best is None or cand < best:
                    best = cand
    return best


def polygon_from_key(lattice: str, key: tuple) -> Polygon:
    sticks = tuple(Stick(_DIR_NAMES[c // _CODE_SPAN], c % _CODE_SPAN - _CODE_OFF) for c in key)
    return Polygon(lattice, sticks, (0, 0, 0))


def canonicalize(p: Polygon, proper_only: bool = False) -> Polygon:
    """Deterministic representative of the symmetry orbit, based at the origin.

    With ``proper_only`` only orientation-preserving symmetries are used, so
    a chiral polygon and its mirror image get different representatives.
    """
    return polygon_from_key(p.lattice, canonical_key(p, proper_only))


def planar_rotation(k: int) -> Symmetry:
    """Rotation of the sh lattice by k*60 degrees about the vertical axis."""
    return next(g for g in SYMMETRIES[SH] if g.name == f"r{k % 6}")


def square(lattice: str = CUBIC, n: int = 1) -> Polygon:
    return Polygon(lattice, (Stick("x", n), Stick("y", n), Stick("x", -n), Stick("y", -n)))
