"""Exact quadratic-surd arithmetic: a + b*sqrt(d) with rational a, b."""

import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mbt.exprcore.numbers import (
    ExactNumber,
    compare_exact,
    is_square_fraction,
    rounded_sqrt_2dp,
    sqrt_square_fraction,
    surd_normalize,
)

mpmath.mp.dps = 50

rationals = st.fractions(
    min_value=Fraction(-50), max_value=Fraction(50), max_denominator=12
)
radicands = st.integers(min_value=0, max_value=400)


def as_mp(x: ExactNumber):
    return mpmath.mpf(x.a.numerator) / x.a.denominator + (
        mpmath.mpf(x.b.numerator) / x.b.denominator
    ) * mpmath.sqrt(x.d)


@given(rationals, rationals, radicands)
@settings(max_examples=1000, deadline=None)
def test_surd_normalize_preserves_value_and_is_idempotent(a, b, d):
    na, nb, nd = surd_normalize(a, b, d)
    assert surd_normalize(na, nb, nd) == (na, nb, nd)
    before = mpmath.mpf(a.numerator) / a.denominator + (
        mpmath.mpf(b.numerator) / b.denominator
    ) * mpmath.sqrt(d)
    after = mpmath.mpf(na.numerator) / na.denominator + (
        mpmath.mpf(nb.numerator) / nb.denominator
    ) * mpmath.sqrt(nd)
    assert abs(before - after) < 1e-9
    # canonical: radicand squarefree and > 1, or no root part at all
    if nb == 0:
        assert nd == 0
    else:
        assert nd > 1
        for p in range(2, 21):
            assert nd % (p * p) != 0


@given(rationals, rationals, radicands, rationals, rationals, radicands)
@settings(max_examples=1000, deadline=None)
def test_compare_exact_agrees_with_high_precision_floats(a1, b1, d1, a2, b2, d2):
    x = ExactNumber.make(a1, b1, d1)
    y = ExactNumber.make(a2, b2, d2)
    gap = as_mp(x) - as_mp(y)
    if abs(gap) > 1e-6:
        want = 1 if gap > 0 else -1
        assert compare_exact(x, y) == want
    else:
        # tiny or zero gap: only the exact route is trustworthy, but the
        # comparison must still be a consistent ordering
        assert compare_exact(x, y) == -compare_exact(y, x)


def test_compare_exact_on_nearby_surds():
    # sqrt(50) vs 5*sqrt(2): equal after normalization
    x = ExactNumber.make(0, 1, 50)
    y = ExactNumber.make(0, 5, 2)
    assert compare_exact(x, y) == 0
    assert compare_exact(ExactNumber.make(0, 1, 2), ExactNumber.make(Fraction(141, 100))) > 0
    assert compare_exact(ExactNumber.make(0, 1, 2), ExactNumber.make(Fraction(142, 100))) < 0


def test_arithmetic_stays_exact():
    r2 = ExactNumber.sqrt_of_rational(Fraction(2))
    assert (r2 * r2).as_fraction() == 2
    assert ((r2 + 1) * (r2 - 1)).as_fraction() == 1
    x = (ExactNumber.make(3) - r2) / 2
    assert float(x) == pytest.approx((3 - math.sqrt(2)) / 2)


def test_mixed_radicand_arithmetic_rejected():
    r2 = ExactNumber.sqrt_of_rational(Fraction(2))
    r3 = ExactNumber.sqrt_of_rational(Fraction(3))
    with pytest.raises(Exception):
        _ = r2 + r3


def test_sqrt_of_rational_fraction():
    x = ExactNumber.sqrt_of_rational(Fraction(9, 4))
    assert x.is_rational and x.as_fraction() == Fraction(3, 2)
    y = ExactNumber.sqrt_of_rational(Fraction(1, 2))
    assert not y.is_rational
    assert float(y) == pytest.approx(math.sqrt(0.5))


@pytest.mark.parametrize(
    "frac, expect",
    [
        (Fraction(9), True),
        (Fraction(8), False),
        (Fraction(9, 4), True),
        (Fraction(2, 4), False),
        (Fraction(0), True),
    ],
)
def test_is_square_fraction(frac, expect):
    assert is_square_fraction(frac) is expect
    if expect:
        root = sqrt_square_fraction(frac)
        assert root * root == frac


@pytest.mark.parametrize(
    "c, expect",
    [
        (Fraction(2), Fraction(141, 100)),
        (Fraction(3), Fraction(173, 100)),
        (Fraction(10), Fraction(316, 100)),
        (Fraction(1, 2), Fraction(71, 100)),
    ],
)
def test_rounded_sqrt_two_decimals(c, expect):
    assert rounded_sqrt_2dp(c) == expect


def test_rounded_sqrt_rounds_half_correctly():
    random.seed(4)
    for _ in range(200):
        c = Fraction(random.randint(1, 10**6), random.randint(1, 100))
        got = rounded_sqrt_2dp(c)
        exact = mpmath.sqrt(mpmath.mpf(c.numerator) / c.denominator)
        assert abs(mpmath.mpf(got.numerator) / got.denominator - exact) <= Fraction(1, 200) + mpmath.mpf(1e-30)
