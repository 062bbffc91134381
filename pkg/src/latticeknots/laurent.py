"""Integer Laurent polynomials in one variable."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping


class LaurentPoly:
    """Sparse integer Laurent polynomial ``sum c_k t^k``; zero coefficients are never stored."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        c = {}
        for k, v in (coeffs or {}).items():
            if v:
                c[int(k)] = int(v)
        self._c = c

    @classmethod
    def from_list(cls, coeffs: Iterable[int], low: int = 0) -> "LaurentPoly":
        """Coefficients in increasing exponent order starting at *low*."""
        return cls({low + i: v for i, v in enumerate(coeffs)})

    @classmethod
    def const(cls, v: int) -> "LaurentPoly":
        return cls({0: v})

    @classmethod
    def monomial(cls, k: int, v: int = 1) -> "LaurentPoly":
        return cls({k: v})

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def low(self) -> int:
        return min(self._c) if self._c else 0

    def high(self) -> int:
        return max(self._c) if self._c else 0

    def to_list(self) -> list[int]:
        if not self._c:
            return []
        lo, hi = self.low(), self.high()
        return [self._c.get(k, 0) for k in range(lo, hi + 1)]

    def __add__(self, other):
        other = _lift(other)
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, 0) + v
        return LaurentPoly(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        c: dict[int, int] = {}
        for k1, v1 in self._c.items():
            for k2, v2 in other._c.items():
                c[k1 + k2] = c.get(k1 + k2, 0) + v1 * v2
        return LaurentPoly(c)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._c) != 1:
                raise ValueError("only monomials can be inverted")
            (k, v), = self._c.items()
            if abs(v) != 1:
                raise ValueError("only unit monomials can be inverted")
            return LaurentPoly({k * n: v ** n})
        out = LaurentPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly({e + k: v for e, v in self._c.items()})

    def substitute_power(self, m: int) -> "LaurentPoly":
        """p(t) -> p(t^m)."""
        return LaurentPoly({e * m: v for e, v in self._c.items()})

    def __call__(self, x):
        total = 0
        for k, v in self._c.items():
            total += v * (Fraction(x) ** k if k < 0 else x ** k)
        return total

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(tuple(sorted(self._c.items())))

    def normalized(self) -> "LaurentPoly":
        """Representative up to units +-t^k: lowest exponent 0, positive leading coefficient."""
        if not self._c:
            return self
        p = self.shift(-self.low())
        if p._c[p.high()] < 0:
            p = -p
        return p

    def is_palindromic(self) -> bool:
        lst = self.to_list()
        return lst == lst[::-1] or lst == [-v for v in lst[::-1]]

    def __repr__(self):
        return f"LaurentPoly({self._c!r})"

    def __str__(self):
        return self.format("t")

    def format(self, var: str = "t") -> str:
        if not self._c:
            return "0"
        parts = []
        for k in sorted(self._c, reverse=True):
            v = self._c[k]
            sign = "-" if v < 0 else "+"
            a = abs(v)
            if k == 0:
                body = str(a)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if a == 1 else f"{a}{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def _lift(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.const(x)
    raise TypeError(f"cannot combine LaurentPoly with {type(x).__name__}")


T = LaurentPoly.monomial(1)


def interpolate(xs: list[int], ys: list[int]) -> LaurentPoly:
    """Exact polynomial through the points (Newton form); coefficients must be integral."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    # expand Newton form
    poly = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (t - xs[i]) + coef[i]
        new = [Fraction(0)] * n
        for k in range(n - 1):
            new[k + 1] += poly[k]
        for k in range(n):
            new[k] -= xs[i] * poly[k]
        new[0] += coef[i]
        poly = new
    out = {}
    for k, v in enumerate(poly):
        if v.denominator != 1:
            raise ArithmeticError("interpolated polynomial has non-integer coefficients")
        out[k] = int(v)
    return LaurentPoly(out)


def int_det(rows: list[list[int]]) -> int:
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mi = m[i]
            mik = mi[k]
            mk = m[k]
            for j in range(k + 1, n):
                mi[j] = (mi[j] * pivot - mik * mk[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]
