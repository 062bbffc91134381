"""The cubic-to-sh lattice map T, the sh-to-cubic edge rewrite and the lower-bound formulas."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

from .lattice import (
    CUBIC,
    SH,
    LatticeError,
    Polygon,
    UNIT,
    Stick,
    apply_symmetry,
    edge_totals,
    normalize,
    planar_rotation,
    scale,
    validate,
)


class TransformError(LatticeError):
    pass


class ZSticksPresent(TransformError):
    pass


class EmbeddingCollision(TransformError):
    pass


def _require_lattice(p: Polygon, lattice: str) -> None:
    if p.lattice != lattice:
        raise TransformError(f"expected a {lattice} polygon, got {p.lattice}")


def apply_T(p: Polygon) -> Polygon:
    """Cubic polygon to sh polygon: x and y keep their names, z becomes w.

    In basis coefficients this is the identity, so order, lengths, stick
    count and edge length are all unchanged.
    """
    _require_lattice(p, CUBIC)
    rep = validate(p)
    if not rep.ok:
        raise TransformError(f"invalid cubic polygon: {rep.first_violation or rep}")
    sticks = tuple(Stick("w" if s.dir == "z" else s.dir, s.length) for s in p.sticks)
    return Polygon(SH, sticks, p.base)


def apply_T_inv(p: Polygon) -> Polygon:
    _require_lattice(p, SH)
    if any(s.dir == "z" for s in p.sticks):
        raise ZSticksPresent("sh polygon still has z-sticks; replace them first")
    sticks = tuple(Stick("z" if s.dir == "w" else s.dir, s.length) for s in p.sticks)
    return Polygon(CUBIC, sticks, p.base)


# unit sh edge -> cubic unit edges; the composite is the linear map
# (a, b, c) -> (2a + b, 2b, c) followed by axis-parallel staircases
_EDGE_IMAGE = {
    "x": (("x", 1), ("x", 1)),
    "y": (("x", 1), ("y", 1), ("y", 1)),
    "z": (("y", 1), ("y", 1), ("x", -1)),
    "w": (("z", 1),),
}


def _rewrite_edges(p: Polygon) -> list[tuple[str, int]]:
    out = []
    for s in p.sticks:
        img = _EDGE_IMAGE[s.dir]
        unit = img if s.length > 0 else tuple((d, -g) for d, g in reversed(img))
        out.extend(unit * abs(s.length))
    return out


def free_reduce(edges: list[tuple[str, int]], cyclic: bool = False) -> tuple[list, list]:
    """Cancel adjacent inverse unit edges.

    Returns the reduced list and the edges dropped from its front by cyclic
    cancellation (the start vertex moves forward along those edges).
    """
    stack: list[tuple[str, int]] = []
    for e in edges:
        if stack and stack[-1][0] == e[0] and stack[-1][1] == -e[1]:
            stack.pop()
        else:
            stack.append(e)
    front: list = []
    if cyclic:
        lo, hi = 0, len(stack) - 1
        while lo < hi and stack[lo][0] == stack[hi][0] and stack[lo][1] == -stack[hi][1]:
            lo += 1
            hi -= 1
        front = stack[:lo]
        stack = stack[lo : hi + 1]
    return stack, front


def edges_to_polygon(lattice: str, edges: list[tuple[str, int]], base) -> Polygon:
    sticks = []
    for d, g in edges:
        if sticks and sticks[-1][0] == d:
            sticks[-1][1] += g
        else:
            sticks.append([d, g])
    sticks = [Stick(d, n) for d, n in sticks if n != 0]
    return normalize(Polygon(lattice, tuple(sticks), base))


def _rewrite_once(p: Polygon) -> Polygon:
    a, b, c = p.base
    base = (2 * a + b, 2 * b, c)
    edges = _rewrite_edges(p)
    reduced, front = free_reduce(edges, cyclic=True)
    for d, g in front:
        u = UNIT[CUBIC][d]
        base = (base[0] + g * u[0], base[1] + g * u[1], base[2] + g * u[2])
    return edges_to_polygon(CUBIC, reduced, base)


def sh_to_cubic_rewrite(p: Polygon, max_retries: int = 2) -> Polygon:
    """Rewrite every sh unit edge as a short cubic staircase.

    Overlapping edges introduced by neighbouring staircases cancel by free
    reduction.  If the result self-intersects the input is scaled by 2 in
    all directions and the rewrite retried.
    """
    _require_lattice(p, SH)
    rep = validate(p)
    if not rep.ok:
        raise TransformError(f"invalid sh polygon: {rep.first_violation or rep}")
    cur = p
    for attempt in range(max_retries + 1):
        out = _rewrite_once(cur)
        if validate(out).ok:
            return out
        cur = scale(cur, 2)
    raise EmbeddingCollision(f"rewrite still collides after {max_retries} rescalings")


def rotate_for_x_majority(p: Polygon) -> Polygon:
    """Planar rotation of *p* with the most x-edges (smallest rotation on ties)."""
    _require_lattice(p, SH)
    best, best_x = p, edge_totals(p)["x"]
    for k in range(1, 6):
        q = apply_symmetry(p, planar_rotation(k))
        ex = edge_totals(q)["x"]
        if ex > best_x:
            best, best_x = q, ex
    return best


def rewrite_edge_bound(p: Polygon) -> int:
    """Upper bound 3e - 2E_w - E_x on the rewritten edge length."""
    t = edge_totals(p)
    e = sum(t.values())
    return 3 * e - 2 * t["w"] - t["x"]


# ---------------------------------------------------------------------------
# lower bounds


class BoundFormula(str, Enum):
    EDGE_LOWER = "EdgeLower"
    STICK_LOWER = "StickLower"


@dataclass(frozen=True)
class Surd:
    """The number sqrt(radicand) + offset, kept exact."""

    radicand: int
    offset: int

    def __float__(self) -> float:
        return math.sqrt(self.radicand) + self.offset

    def __str__(self) -> str:
        r = math.isqrt(self.radicand)
        if r * r == self.radicand:
            return str(r + self.offset)
        if self.offset == 0:
            return f"√{self.radicand}"
        sign = "+" if self.offset > 0 else "−"
        return f"√{self.radicand}{sign}{abs(self.offset)}"


@dataclass(frozen=True)
class BoundReport:
    input_value: int
    bound_value: Union[Fraction, Surd]
    ceil_bound: int
    formula: BoundFormula

    def display(self) -> str:
        v = self.bound_value
        if isinstance(v, Fraction):
            text = str(v.numerator) if v.denominator == 1 else _decimal(v)
        else:
            text = str(v)
        return text


def _decimal(v: Fraction) -> str:
    # exact when the denominator only has factors 2 and 5
    d = v.denominator
    k = 0
    while d % 2 == 0 or d % 5 == 0:
        d //= 2 if d % 2 == 0 else 5
        k += 1
    if d == 1:
        scaled = v * 10 ** k
        s = f"{abs(scaled.numerator):0{k + 1}d}"
        out = s[:-k] + "." + s[-k:] if k else s
        return ("-" if v < 0 else "") + out
    return str(v)


def _ceil_fraction(v: Fraction) -> int:
    return -((-v.numerator) // v.denominator)


def edge_lower_bound(e_cubic: int) -> BoundReport:
    """e_sh >= (3 e_L + 30) / 8."""
    if e_cubic < 1:
        raise ValueError("cubic edge length must be positive")
    v = Fraction(3 * e_cubic + 30, 8)
    return BoundReport(e_cubic, v, _ceil_fraction(v), BoundFormula.EDGE_LOWER)


def ceil_sqrt(n: int) -> int:
    r = math.isqrt(n)
    return r if r * r == n else r + 1


def stick_lower_bound(s_cubic: int) -> BoundReport:
    """s_sh >= 2 sqrt(s_L + 9/4) - 3, which equals sqrt(4 s_L + 9) - 3."""
    if s_cubic < 1:
        raise ValueError("cubic stick number must be positive")
    radicand = 4 * s_cubic + 9
    r = math.isqrt(radicand)
    value: Union[Fraction, Surd]
    if r * r == radicand:
        value = Fraction(r - 3)
    else:
        value = Surd(radicand, -3)
    # smallest k with (k + 3)^2 >= radicand
    return BoundReport(s_cubic, value, ceil_sqrt(radicand) - 3, BoundFormula.STICK_LOWER)
