"""Command-line front end: ``latticeknots <command> ...``.

Exit codes: 0 success, 1 error, 2 no applicable move.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import catalog, moves
from .enumeration import DEFAULT_CENSUS, SearchConfig, census_permutations, search_for_type, search_sharded
from .knot_id import KnotIdError, KnotTag, classify
from .lattice import (
    CUBIC,
    SH,
    LatticeError,
    Polygon,
    edge_length,
    normalize,
    parse_word,
    properly_leveled,
    stick_census,
    to_knotw,
    validate,
    w_levels,
)
from .render import render_svg
from .transform import (
    TransformError,
    apply_T,
    apply_T_inv,
    edge_lower_bound,
    rewrite_edge_bound,
    rotate_for_x_majority,
    sh_to_cubic_rewrite,
    stick_lower_bound,
)

EXIT_OK, EXIT_ERROR, EXIT_NO_MOVE = 0, 1, 2
THEOREM_TYPES = {KnotTag.K3_1.value, KnotTag.K4_1.value}


class CliError(Exception):
    pass


def _read(path: str) -> Polygon:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None
    return parse_word(text)


def _read_valid(path: str) -> Polygon:
    p = normalize(_read(path))
    rep = validate(p)
    if not rep.ok:
        raise CliError(f"{path}: not a valid polygon: {rep.first_violation or rep}")
    return p


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}") from None


# ---------------------------------------------------------------------------
# classify


def classify_report(p: Polygon) -> dict:
    kt = classify(p)
    sc = stick_census(p)
    rep = {
        "lattice": p.lattice,
        "word": p.word,
        "sticks": len(p.sticks),
        "census": {"x": sc.nx, "y": sc.ny, "z": sc.nz, "w": sc.nw},
        "edges": edge_length(p),
        "type": kt.tag.value,
        "determinant": kt.determinant,
        "alexander": str(kt.alexander),
        "crossings": kt.crossings,
    }
    if p.lattice == SH:
        rep["w_levels"] = w_levels(p)
        rep["properly_leveled"] = properly_leveled(p)
    if kt.caveat:
        rep["caveat"] = kt.caveat
    return rep


def cmd_classify(args) -> int:
    p = _read_valid(args.path)
    rep = classify_report(p)
    if args.json:
        print(json.dumps(rep, sort_keys=True))
        return EXIT_OK
    print(f"{rep['type']}, {rep['sticks']} sticks, {rep['edges']} edges, det {rep['determinant']}")
    c = rep["census"]
    print(f"lattice: {rep['lattice']}")
    print(f"census: x={c['x']} y={c['y']} z={c['z']} w={c['w']}")
    if "w_levels" in rep:
        print(f"w-levels: {rep['w_levels']} (properly leveled: {str(rep['properly_leveled']).lower()})")
    print(f"alexander: {rep['alexander']}")
    if "caveat" in rep:
        print(f"caveat: {rep['caveat']}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# transform


def cmd_transform(args) -> int:
    p = _read_valid(args.path)
    if args.to == SH:
        if p.lattice != CUBIC:
            raise CliError("input is already an sh polygon")
        q = apply_T(p)
    else:
        if p.lattice != SH:
            raise CliError("input is already a cubic polygon")
        if args.rewrite:
            if args.x_majority:
                p = rotate_for_x_majority(p)
            q = sh_to_cubic_rewrite(p)
        else:
            q = apply_T_inv(p)
    _write(args.output, to_knotw(q))
    before, after = classify(p).tag.value, classify(q).tag.value
    msg = (f"{p.lattice} -> {q.lattice}: sticks {len(p.sticks)} -> {len(q.sticks)}, "
           f"edges {edge_length(p)} -> {edge_length(q)}, type {before} -> {after}")
    if args.rewrite:
        msg += f", rewrite bound {rewrite_edge_bound(p)}"
    print(msg, file=sys.stderr)
    return EXIT_OK if before == after else EXIT_ERROR


# ---------------------------------------------------------------------------
# reduce


def _first_r_move(p: Polygon):
    n = len(p.sticks)
    for s in range(n):
        for t in range(n):
            if s == t:
                continue
            try:
                return moves.r_move(p, s, t)
            except moves.MoveError:
                continue
    return None


def _first_z_replace(p: Polygon):
    for i, s in enumerate(p.sticks):
        if s.dir != "z":
            continue
        try:
            return moves.z_replace(p, i)
        except moves.MoveError:
            continue
    return None


def apply_move(p: Polygon, move: str):
    """One application of *move* at the first applicable site, or None."""
    try:
        if move == "corner":
            if p.lattice != SH:
                return None
            site = moves.find_reducible_corner(p)
            return None if site is None else moves.corner_to_z(p, site)
        if move == "bevel":
            return moves.bevel_any_rotation(p) if p.lattice == SH else None
        if move == "rmove":
            return _first_r_move(p)
        if move == "zreplace":
            return _first_z_replace(p) if p.lattice == SH else None
        if move == "squeeze":
            return moves.squeeze_and_reduce(p) if p.lattice == CUBIC else None
    except moves.MoveError:
        return None
    raise CliError(f"unknown move {move!r}")


def cmd_reduce(args) -> int:
    p = _read_valid(args.path)
    trace = []
    seen = {p.word}
    cur = p
    limit = args.max_steps if args.all else 1
    while len(trace) < limit:
        out = apply_move(cur, args.move)
        if out is None or out.result.word in seen:
            break
        trace.append(out)
        cur = out.result
        seen.add(cur.word)
    if args.trace:
        _write(args.trace, "".join(t.trace_record() + "\n" for t in trace))
    if not trace:
        print(f"no applicable {args.move} move", file=sys.stderr)
        return EXIT_NO_MOVE
    _write(args.output, to_knotw(cur))
    print(f"{len(trace)} move(s): sticks {len(p.sticks)} -> {len(cur.sticks)}, "
          f"edges {edge_length(p)} -> {edge_length(cur)}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# enumerate


def _parse_pattern(text: str):
    if text == "free":
        return None
    pairs = []
    for tok in text.split(","):
        a, _, b = tok.partition("-")
        pairs.append((int(a), int(b)))
    return tuple(pairs)


def _parse_census(text: str):
    return census_permutations(tuple(int(ch) for ch in tok.strip()) for tok in text.split(","))


def cmd_enumerate(args) -> int:
    pattern = _parse_pattern(args.pattern)
    n_levels = args.levels if args.levels else (len(pattern) if pattern else 4)
    census_set = _parse_census(args.census) if args.census else census_permutations(DEFAULT_CENSUS)
    if args.lattice == CUBIC and not args.census:
        census_set = None
    cfg = SearchConfig(
        total_sticks=args.sticks,
        max_stick_len=args.max_len,
        w_pattern=pattern,
        planar_census_set=census_set,
        level_heights=tuple(range(n_levels)),
        lattice=args.lattice,
    )
    cfg.check()
    census = search_sharded(cfg, args.shards, args.workers or 1)
    text = census.dumps(include_timing=not args.no_timing)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        _write(os.path.join(args.out, "census.json"), text)
        for tag, words in census.exemplars().items():
            for k, w in enumerate(words):
                _write(os.path.join(args.out, f"{tag}_{k}.knotw"),
                       to_knotw(parse_word(w, cfg.lattice), [f"{tag} exemplar {k}"]))
    else:
        sys.stdout.write(text)
    summary = ", ".join(f"{t}: {n}" for t, n in census.counts.items()) or "empty"
    print(f"census {summary}; explored {census.explored}, pruned {census.pruned}", file=sys.stderr)
    if args.expect_theorem:
        extra = census.nontrivial_tags() - THEOREM_TYPES
        if extra:
            print(f"unexpected knot types: {sorted(extra)}", file=sys.stderr)
            return EXIT_ERROR
    return EXIT_OK


# ---------------------------------------------------------------------------
# bounds, render, catalog, search


def cmd_bounds(args) -> int:
    if args.e_cubic is None and args.s_cubic is None:
        raise CliError("give --e-cubic and/or --s-cubic")
    try:
        if args.e_cubic is not None:
            r = edge_lower_bound(args.e_cubic)
            print(f"e_sh ≥ {r.display()} → {r.ceil_bound}")
        if args.s_cubic is not None:
            r = stick_lower_bound(args.s_cubic)
            print(f"s_sh ≥ {r.display()} → {r.ceil_bound}")
    except ValueError as exc:
        raise CliError(str(exc)) from None
    return EXIT_OK


def cmd_render(args) -> int:
    p = _read_valid(args.path)
    _write(args.output, render_svg(p, plane=args.plane))
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.check:
        problems = catalog.self_test()
        for line in problems:
            print(line, file=sys.stderr)
        if problems:
            return EXIT_ERROR
    for e in catalog.entries():
        if args.show:
            if e.name == args.show:
                sys.stdout.write(to_knotw(e.polygon, [f"{e.name}: {e.expected.value}", e.provenance]))
                return EXIT_OK
            continue
        print(f"{e.name:16s} {e.lattice:6s} {len(e.polygon.sticks):3d} sticks  {e.expected.value}")
    if args.show:
        raise CliError(f"no catalog entry {args.show!r}")
    return EXIT_OK


def cmd_search(args) -> int:
    res = search_for_type(
        args.target,
        total_sticks=args.sticks,
        max_stick_len=args.max_len,
        budget=args.budget,
        seed=args.seed,
        lattice=args.lattice,
    )
    print(f"explored {res.explored}, exhausted {str(res.exhausted).lower()}", file=sys.stderr)
    if res.polygon is None:
        print(f"no {args.target} found", file=sys.stderr)
        return EXIT_NO_MOVE
    _write(args.output, to_knotw(res.polygon, [f"{args.target}, found by search"]))
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="latticeknots", description="Polygonal knots in the cubic and sh lattices.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="identify the knot type of a .knotw file")
    c.add_argument("path")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_classify)

    t = sub.add_parser("transform", help="move a polygon between lattices")
    t.add_argument("path")
    t.add_argument("--to", choices=(SH, CUBIC), required=True)
    t.add_argument("--rewrite", action="store_true", help="rewrite sh edges as cubic staircases")
    t.add_argument("--x-majority", action="store_true", help="rotate for the most x-edges before rewriting")
    t.add_argument("-o", "--output")
    t.set_defaults(func=cmd_transform)

    r = sub.add_parser("reduce", help="apply knot-type-preserving moves")
    r.add_argument("path")
    r.add_argument("--move", choices=("corner", "bevel", "rmove", "zreplace", "squeeze"), required=True)
    r.add_argument("--all", action="store_true", help="repeat until no move applies")
    r.add_argument("--max-steps", type=int, default=1000)
    r.add_argument("--trace", help="write the JSON-lines move trace here")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_reduce)

    e = sub.add_parser("enumerate", help="exhaustive census of properly leveled polygons")
    e.add_argument("--sticks", type=int, default=11)
    e.add_argument("--max-len", type=int, default=3)
    e.add_argument("--pattern", default="1-3,2-3,2-4,1-4", help="vertical sticks as level pairs, or 'free'")
    e.add_argument("--levels", type=int, help="number of levels (needed with --pattern free)")
    e.add_argument("--census", help="planar stick censuses such as 421,331,322 (permutations included)")
    e.add_argument("--lattice", choices=(SH, CUBIC), default=SH)
    e.add_argument("--shards", type=int, default=1)
    e.add_argument("--workers", type=int)
    e.add_argument("--out")
    e.add_argument("--no-timing", action="store_true")
    e.add_argument("--expect-theorem", action="store_true", help="fail unless nontrivial types are only 3_1 and 4_1")
    e.set_defaults(func=cmd_enumerate)

    b = sub.add_parser("bounds", help="sh lower bounds from cubic invariants")
    b.add_argument("--s-cubic", type=int)
    b.add_argument("--e-cubic", type=int)
    b.set_defaults(func=cmd_bounds)

    v = sub.add_parser("render", help="draw a polygon as SVG")
    v.add_argument("path")
    v.add_argument("-o", "--output")
    v.add_argument("--plane", choices=("xy", "tilt"), default="xy")
    v.set_defaults(func=cmd_render)

    k = sub.add_parser("catalog", help="list or check the bundled conformations")
    k.add_argument("--check", action="store_true")
    k.add_argument("--show")
    k.set_defaults(func=cmd_catalog)

    s = sub.add_parser("search", help="look for a polygon of a given knot type")
    s.add_argument("target", choices=[t.value for t in KnotTag if t != KnotTag.UNKNOWN])
    s.add_argument("--sticks", type=int, default=11)
    s.add_argument("--max-len", type=int, default=3)
    s.add_argument("--budget", type=int, default=2_000_000)
    s.add_argument("--seed", type=int)
    s.add_argument("--lattice", choices=(SH, CUBIC), default=SH)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_search)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, LatticeError, TransformError, KnotIdError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
