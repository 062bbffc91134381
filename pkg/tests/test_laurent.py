from __future__ import annotations

import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from latticeknots.laurent import LaurentPoly, T, int_det, interpolate

coeff_maps = st.dictionaries(st.integers(-6, 6), st.integers(-9, 9), max_size=6)


def test_arithmetic_basics():
    p = LaurentPoly.from_list([1, -1, 1])
    assert str(p) == "t^2 - t + 1"
    assert p * T == LaurentPoly.from_list([1, -1, 1], low=1)
    assert (p - p).is_zero()
    assert p(2) == 3
    assert LaurentPoly.monomial(-2, 3)(2) == sympy.Rational(3, 4)
    assert T ** 3 == LaurentPoly.monomial(3)


def test_normalized_and_palindrome():
    p = LaurentPoly({-1: -1, 0: 3, 1: -1})
    assert p.normalized() == LaurentPoly.from_list([1, -3, 1])
    assert p.is_palindromic()
    assert not LaurentPoly.from_list([1, 2]).is_palindromic()


def test_format():
    assert LaurentPoly({-2: 1, 0: -2, 3: 5}).format("A") == "5A^3 - 2 + A^-2"
    assert str(LaurentPoly()) == "0"


@given(coeff_maps, coeff_maps)
def test_ring_laws(a, b):
    p, q = LaurentPoly(a), LaurentPoly(b)
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) - q == p
    for x in (1, 2, -3):
        assert (p * q)(x) == p(x) * q(x)


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=7))
def test_interpolate_recovers_polynomial(cs):
    p = LaurentPoly.from_list(cs)
    xs = list(range(-3, len(cs) - 3))
    assert interpolate(xs, [int(p(x)) for x in xs]) == p


def test_interpolate_rejects_fractional():
    with pytest.raises(ArithmeticError):
        interpolate([0, 2], [0, 1])


@pytest.mark.parametrize("n", [0, 1, 2, 3, 5, 7])
def test_int_det_matches_sympy(n):
    rng = random.Random(n)
    rows = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
    want = int(sympy.Matrix(rows).det()) if n else 1
    assert int_det(rows) == want


def test_int_det_singular():
    assert int_det([[1, 2], [2, 4]]) == 0
    assert int_det([[0, 1], [1, 0]]) == -1
