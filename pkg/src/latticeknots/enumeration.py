"""Exhaustive and targeted searches over properly leveled lattice polygons.

A polygon is generated level by level.  The vertical sticks are fixed by
a cycle through the levels; on each level a planar arc of one or more
sticks is grown from the end of the incoming vertical stick.  Partial
words are pruned when they revisit a lattice point (which for these
lattices is the same as self-intersection), when the stick census can no
longer be completed, or when the start point is out of reach.
"""
from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import permutations
from typing import Iterable, Optional, Sequence

from .knot_id import KnotTag, identify
from .lattice import CUBIC, SH, Polygon, Stick, canonical_key, format_word, polygon_from_key

DEFAULT_PATTERN = ((1, 3), (2, 3), (2, 4), (1, 4))
DEFAULT_CENSUS = ((4, 2, 1), (3, 3, 1), (3, 2, 2))

# planar steps in basis coefficients (a, b)
_STEP = {"x": (1, 0), "y": (0, 1), "z": (-1, 1)}


class ConfigError(ValueError):
    pass


def census_permutations(triples: Iterable[Sequence[int]]) -> tuple[tuple[int, int, int], ...]:
    out = set()
    for t in triples:
        out.update(permutations(tuple(t)))
    return tuple(sorted(out))


@dataclass(frozen=True)
class SearchConfig:
    total_sticks: int = 11
    max_stick_len: int = 3
    w_pattern: Optional[tuple[tuple[int, int], ...]] = DEFAULT_PATTERN
    planar_census_set: Optional[tuple[tuple[int, int, int], ...]] = census_permutations(DEFAULT_CENSUS)
    level_heights: tuple[int, ...] = (0, 1, 2, 3)
    require_properly_leveled: bool = True
    lattice: str = SH

    @property
    def n_levels(self) -> int:
        return len(self.level_heights)

    @property
    def n_planar(self) -> int:
        return self.total_sticks - self.n_levels

    def planar_dirs(self) -> tuple[str, ...]:
        return ("x", "y", "z") if self.lattice == SH else ("x", "y")

    def check(self) -> None:
        h = self.level_heights
        if any(b <= a for a, b in zip(h, h[1:])):
            raise ConfigError("level heights must be strictly increasing")
        if self.max_stick_len < 1:
            raise ConfigError("max_stick_len must be positive")
        if self.lattice not in (SH, CUBIC):
            raise ConfigError(f"unknown lattice {self.lattice!r}")
        if not self.require_properly_leveled:
            raise ConfigError("only properly leveled searches are implemented")
        if self.w_pattern is not None and len(self.w_pattern) != self.n_levels:
            raise ConfigError("a properly leveled polygon has one vertical stick per level")
        if self.n_planar < self.n_levels:
            raise ConfigError("every level needs at least one planar stick")
        if self.planar_census_set is not None:
            for t in self.planar_census_set:
                if len(t) != len(self.planar_dirs()):
                    raise ConfigError(f"census {t} does not match the planar directions")
                if sum(t) + self.n_levels != self.total_sticks:
                    raise ConfigError(f"census {t} plus {self.n_levels} vertical sticks is not {self.total_sticks}")
        level_cycles(self)

    def to_json(self) -> dict:
        d = asdict(self)
        d["w_pattern"] = None if self.w_pattern is None else [list(t) for t in self.w_pattern]
        d["planar_census_set"] = None if self.planar_census_set is None else [list(t) for t in self.planar_census_set]
        d["level_heights"] = list(self.level_heights)
        return d


def level_cycles(cfg: SearchConfig) -> list[tuple[int, ...]]:
    """Orders in which the polygon visits levels 1..n, starting at level 1."""
    n = cfg.n_levels
    if cfg.w_pattern is None:
        out = []
        for rest in permutations(range(2, n + 1)):
            if n > 2 and rest[0] > rest[-1]:
                continue  # reversed duplicate
            out.append((1,) + rest)
        return out
    adj: dict[int, list[int]] = {i: [] for i in range(1, n + 1)}
    for i, j in cfg.w_pattern:
        if i == j or i not in adj or j not in adj:
            raise ConfigError(f"bad vertical stick {(i, j)}")
        adj[i].append(j)
        adj[j].append(i)
    if any(len(v) != 2 for v in adj.values()):
        raise ConfigError("every level must carry exactly two vertical stick ends")
    if n == 2:
        return [(1, 2)]
    order = [1]
    prev, cur = None, 1
    while True:
        nxt = sorted(adj[cur])
        step = nxt[0] if nxt[0] != prev else nxt[1]
        if step == 1:
            break
        order.append(step)
        prev, cur = cur, step
    if len(order) != n:
        raise ConfigError("vertical sticks do not form a single cycle")
    return [tuple(order)]


def compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def hex_distance(a: int, b: int) -> int:
    """Fewest sh planar unit steps from the origin to (a, b)."""
    if a * b >= 0:
        return abs(a) + abs(b)
    return max(abs(a), abs(b))


def _feasible_counts(census_set, n_dirs: int, n_planar: int) -> Optional[frozenset]:
    if census_set is None:
        return None
    out = set()
    for t in census_set:
        ranges = [range(v + 1) for v in t]
        stack = [()]
        for r in ranges:
            stack = [s + (v,) for s in stack for v in r]
        out.update(stack)
    return frozenset(out)


@dataclass(frozen=True)
class Unit:
    """One shard unit: a level cycle, a split of planar sticks and the first stick's length."""

    cycle: tuple[int, ...]
    parts: tuple[int, ...]
    first_len: int


def search_units(cfg: SearchConfig) -> list[Unit]:
    out = []
    for cyc in level_cycles(cfg):
        for parts in compositions(cfg.n_planar, cfg.n_levels):
            for length in range(1, cfg.max_stick_len + 1):
                out.append(Unit(cyc, parts, length))
    return out


@dataclass
class _Tally:
    explored: int = 0
    pruned: int = 0
    keys: dict = field(default_factory=dict)


class _Stop(Exception):
    pass


def _single_stick(dirs, ta: int, tb: int):
    """(class index, signed length) of the one planar stick with displacement (ta, tb)."""
    for k, d in enumerate(dirs):
        if d == "x" and tb == 0 and ta:
            return k, ta
        if d == "y" and ta == 0 and tb:
            return k, tb
        if d == "z" and ta == -tb and tb:
            return k, tb
    return None


def _run_unit(cfg: SearchConfig, unit: Unit, tally: _Tally, on_leaf, rng: Optional[random.Random] = None,
              budget: Optional[int] = None) -> None:
    """Depth-first search below one shard unit; calls on_leaf(sticks) per closed embedded word."""
    L = cfg.max_stick_len
    lat = cfg.lattice
    vert = "w" if lat == SH else "z"
    dirs = cfg.planar_dirs()
    nd = len(dirs)
    feas = _feasible_counts(cfg.planar_census_set, nd, cfg.n_planar)
    heights = [cfg.level_heights[lv - 1] for lv in unit.cycle]
    parts = unit.parts
    n_seg = len(parts)
    steps = [_STEP[d] for d in dirs]
    # choices: (class, sign, length)
    choices = [(k, g, l) for k in range(nd) for g in (1, -1) for l in range(1, L + 1)]
    visited = {(0, 0, heights[0])}
    sticks: list = []
    counts = [0] * nd

    def vertical(a, b, h0, h1):
        g = 1 if h1 > h0 else -1
        return [(a, b, h) for h in range(h0 + g, h1 + g, g)]

    def place_planar(a, b, h, k, g, l):
        da, db = steps[k]
        da, db = da * g, db * g
        pts = []
        for t in range(1, l + 1):
            q = (a + t * da, b + t * db, h)
            if q in visited:
                return None
            pts.append(q)
        return pts

    def rec(seg: int, j: int, a: int, b: int, last: int, remaining: int) -> None:
        h = heights[seg]
        if remaining == 1:
            close(seg, a, b, last, h)
            return
        opts = choices
        if seg == 0 and j == 0:
            opts = [(0, 1, unit.first_len)]
        elif rng is not None:
            opts = choices[:]
            rng.shuffle(opts)
        for k, g, l in opts:
            if k == last:
                continue
            tally.explored += 1
            if budget is not None and tally.explored > budget:
                raise _Stop
            counts[k] += 1
            if feas is not None and tuple(counts) not in feas:
                counts[k] -= 1
                tally.pruned += 1
                continue
            pts = place_planar(a, b, h, k, g, l)
            if pts is None:
                counts[k] -= 1
                tally.pruned += 1
                continue
            na, nb = pts[-1][0], pts[-1][1]
            r = remaining - 1
            if lat == SH:
                dist = hex_distance(na, nb)
            else:
                dist = abs(na) + abs(nb)
            if dist > r * L:
                counts[k] -= 1
                tally.pruned += 1
                continue
            visited.update(pts)
            sticks.append(Stick(dirs[k], g * l))
            if j + 1 < parts[seg]:
                rec(seg, j + 1, na, nb, k, r)
            else:
                h2 = heights[seg + 1]
                vpts = vertical(na, nb, h, h2)
                if any(q in visited for q in vpts):
                    tally.pruned += 1
                else:
                    visited.update(vpts)
                    sticks.append(Stick(vert, h2 - h))
                    rec(seg + 1, 0, na, nb, -1, r)
                    sticks.pop()
                    visited.difference_update(vpts)
            sticks.pop()
            visited.difference_update(pts)
            counts[k] -= 1

    def close(seg, a, b, last, h):
        tally.explored += 1
        # one stick back to (0, 0) on this level
        sol = _single_stick(dirs, -a, -b)
        if sol is None or sol[0] == last or abs(sol[1]) > L:
            tally.pruned += 1
            return
        k, n = sol
        g, l = (1 if n > 0 else -1), abs(n)
        counts[k] += 1
        try:
            if cfg_set is not None and tuple(counts) not in cfg_set:
                tally.pruned += 1
                return
            da, db = steps[k]
            pts = [(a + t * g * da, b + t * g * db, h) for t in range(1, l + 1)]
            vpts = vertical(0, 0, h, heights[0])[:-1]
            if any(q in visited for q in pts) or any(q in visited for q in vpts):
                tally.pruned += 1
                return
            on_leaf(sticks + [Stick(dirs[k], n), Stick(vert, heights[0] - h)], heights[0])
        finally:
            counts[k] -= 1

    cfg_set = frozenset(cfg.planar_census_set) if cfg.planar_census_set is not None else None
    rec(0, 0, 0, 0, -1, cfg.n_planar)


# ---------------------------------------------------------------------------
# census


@dataclass
class Census:
    config: SearchConfig
    keys: dict = field(default_factory=dict)  # canonical key -> (tag, max stick length)
    explored: int = 0
    pruned: int = 0
    seconds: float = 0.0

    @property
    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for tag, _ in self.keys.values():
            out[tag] = out.get(tag, 0) + 1
        return dict(sorted(out.items()))

    def nontrivial_tags(self) -> set[str]:
        return {t for t in self.counts if t != KnotTag.UNKNOT.value}

    def exemplars(self, k: int = 5) -> dict[str, list[str]]:
        out: dict[str, list] = {}
        for key in sorted(self.keys):
            tag = self.keys[key][0]
            lst = out.setdefault(tag, [])
            if len(lst) < k:
                lst.append(format_word(polygon_from_key(self.config.lattice, key)))
        return dict(sorted(out.items()))

    def max_stick_length(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for tag, m in self.keys.values():
            out[tag] = max(out.get(tag, 0), m)
        return dict(sorted(out.items()))

    def merge(self, other: "Census") -> "Census":
        keys = dict(self.keys)
        keys.update(other.keys)
        return Census(self.config, keys, self.explored + other.explored, self.pruned + other.pruned,
                      self.seconds + other.seconds)

    def to_json(self, k: int = 5, include_timing: bool = True) -> dict:
        d = {
            "config": self.config.to_json(),
            "counts": self.counts,
            "exemplars": self.exemplars(k),
            "max_stick_length": self.max_stick_length(),
            "explored": self.explored,
            "pruned": self.pruned,
        }
        if include_timing:
            d["seconds"] = round(self.seconds, 3)
        return d

    def dumps(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_json(include_timing=include_timing), indent=2, sort_keys=True) + "\n"


def _census_leaf(cfg: SearchConfig, census: Census):
    vert = "w" if cfg.lattice == SH else "z"

    def on_leaf(sticks, h0):
        p = Polygon(cfg.lattice, tuple(sticks), (0, 0, h0))
        key = canonical_key(p)
        if key in census.keys:
            return
        tag = identify(polygon_from_key(cfg.lattice, key), check=False).tag.value
        census.keys[key] = (tag, max(abs(s.length) for s in sticks if s.dir != vert))

    return on_leaf


def run_units(cfg: SearchConfig, units: Sequence[Unit]) -> Census:
    cfg.check()
    census = Census(cfg)
    tally = _Tally()
    t0 = time.perf_counter()
    leaf = _census_leaf(cfg, census)
    for u in units:
        _run_unit(cfg, u, tally, leaf)
    census.explored = tally.explored
    census.pruned = tally.pruned
    census.seconds = time.perf_counter() - t0
    return census


def search(cfg: SearchConfig = SearchConfig()) -> Census:
    """Exhaustive census for *cfg*."""
    return run_units(cfg, search_units(cfg))


@dataclass(frozen=True)
class Shard:
    config: SearchConfig
    index: int
    count: int
    units: tuple[Unit, ...]


def shard(cfg: SearchConfig, n_shards: int) -> list[Shard]:
    """Split the search units round-robin into *n_shards* disjoint shards."""
    if n_shards < 1:
        raise ConfigError("n_shards must be at least 1")
    units = search_units(cfg)
    return [Shard(cfg, i, n_shards, tuple(units[i::n_shards])) for i in range(n_shards)]


def run_shard(s: Shard) -> Census:
    return run_units(s.config, s.units)


def merge(censuses: Sequence[Census]) -> Census:
    if not censuses:
        raise ValueError("nothing to merge")
    out = Census(censuses[0].config)
    for c in censuses:
        out = out.merge(c)
    return out


def search_sharded(cfg: SearchConfig, n_shards: int, workers: int = 1) -> Census:
    parts = shard(cfg, n_shards)
    t0 = time.perf_counter()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(run_shard, parts))
    else:
        results = [run_shard(s) for s in parts]
    out = merge(results)
    out.seconds = time.perf_counter() - t0
    return out


# ---------------------------------------------------------------------------
# targeted search


def all_census_triples(n_planar: int, n_dirs: int = 3) -> tuple:
    out = []
    for nx in range(n_planar + 1):
        for ny in range(n_planar + 1 - nx):
            if n_dirs == 2:
                if nx + ny == n_planar:
                    out.append((nx, ny))
                continue
            out.append((nx, ny, n_planar - nx - ny))
    return tuple(out)


@dataclass
class TypeSearchResult:
    polygon: Optional[Polygon]
    explored: int
    exhausted: bool


def search_for_type(
    target,
    total_sticks: int = 11,
    max_stick_len: int = 3,
    budget: Optional[int] = 2_000_000,
    n_vertical: Optional[Sequence[int]] = None,
    seed: Optional[int] = None,
    lattice: str = SH,
    accept=None,
    config: Optional[SearchConfig] = None,
) -> TypeSearchResult:
    """First polygon classifying as *target* within a node budget.

    Vertical stick counts default to every value leaving at least one
    planar stick per level; every level cycle is tried.  A seed shuffles
    the branching order, which helps for large words.  ``accept`` can add
    a further test on candidate polygons.  A *config* restricts the search
    to that configuration's space instead.
    """
    tag = KnotTag(getattr(target, "value", target))
    if config is not None:
        lattice = config.lattice
    if n_vertical is None:
        n_vertical = [k for k in range(2, total_sticks // 2 + 1)]
    rng = random.Random(seed) if seed is not None else None
    tally = _Tally()
    found: list[Polygon] = []
    n_dirs = 3 if lattice == SH else 2
    seen: set = set()

    def on_leaf(sticks, h0):
        p = Polygon(lattice, tuple(sticks), (0, 0, h0))
        key = canonical_key(p)
        if key in seen:
            return
        seen.add(key)
        if identify(p, check=False).tag == tag and (accept is None or accept(p)):
            found.append(polygon_from_key(lattice, key))
            raise _Stop

    if config is not None:
        config.check()
        configs = [config]
    else:
        configs = []
        for nv in n_vertical:
            cfg = SearchConfig(
                total_sticks=total_sticks,
                max_stick_len=max_stick_len,
                w_pattern=None,
                planar_census_set=all_census_triples(total_sticks - nv, n_dirs),
                level_heights=tuple(range(nv)),
                lattice=lattice,
            )
            if cfg.n_planar >= nv:
                configs.append(cfg)
    exhausted = True
    try:
        for cfg in configs:
            units = search_units(cfg)
            if rng is not None:
                rng.shuffle(units)
            for u in units:
                _run_unit(cfg, u, tally, on_leaf, rng=rng, budget=budget)
    except _Stop:
        exhausted = False
    return TypeSearchResult(found[0] if found else None, tally.explored, exhausted)
