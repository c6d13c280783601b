import math
from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mixedcycles.exact import Surd, as_fraction, ceil_real, floor_real, real_from_json, real_to_json

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=50)
positive = st.fractions(min_value=Fraction(1, 10**6), max_value=4, max_denominator=10**6)


def test_as_fraction_inputs():
    assert as_fraction("0.05") == Fraction(1, 20)
    assert as_fraction("1/3") == Fraction(1, 3)
    assert as_fraction(0.1) == Fraction(1, 10)
    with pytest.raises(TypeError):
        as_fraction(True)
    with pytest.raises(ValueError):
        as_fraction(float("inf"))


def test_root_boundary_is_exact():
    s = Surd.power(Fraction(1, 16), 4)
    assert s == Fraction(1, 2)
    assert not s < Fraction(1, 2) and not s > Fraction(1, 2)
    assert Surd(1, -2, Fraction(1, 16), 4) == 0


def test_floor_and_ceil_at_integers():
    s = Surd(3, 4, Fraction(1, 16), 2)  # 3 + 4 * 1/4 = 4
    assert floor_real(s) == 4 and ceil_real(s) == 4
    t = Surd(3, 4, Fraction(1, 17), 2)
    assert floor_real(t) == 3 and ceil_real(t) == 4


def test_mismatched_roots_refuse_to_mix():
    with pytest.raises(ValueError):
        Surd.power(Fraction(1, 2), 2) + Surd.power(Fraction(1, 2), 3)
    with pytest.raises(ValueError):
        Surd(0, 1, 0, 2)


@given(fractions, fractions, positive, st.integers(1, 6), fractions)
def test_comparison_matches_high_precision(base, coeff, eta, root, x):
    s = Surd(base, coeff, eta, root)
    # a root computed far beyond the gaps that matter here
    getcontext().prec = 80
    r = (Decimal(eta.numerator) / Decimal(eta.denominator)) ** (Decimal(1) / Decimal(root))
    value = Decimal(base.numerator) / Decimal(base.denominator) + Decimal(coeff.numerator) / Decimal(coeff.denominator) * r
    diff = value - Decimal(x.numerator) / Decimal(x.denominator)
    if abs(diff) > Decimal(10) ** -60:
        assert (s > x) == (diff > 0)
        assert (s < x) == (diff < 0)


@given(fractions, fractions, positive, st.integers(1, 6))
def test_floor_ceil_bracket(base, coeff, eta, root):
    s = Surd(base, coeff, eta, root)
    f, c = math.floor(s), math.ceil(s)
    assert f <= s < f + 1
    assert c - 1 < s <= c


@given(fractions, fractions, positive, st.integers(1, 6), fractions)
def test_arithmetic_is_linear(base, coeff, eta, root, k):
    s = Surd(base, coeff, eta, root)
    assert (s * k) - (s * k) == 0
    assert (s + s) == s * 2
    assert (k - s) == -(s - k)


@given(fractions, fractions, positive, st.integers(1, 6))
def test_json_round_trip(base, coeff, eta, root):
    s = Surd(base, coeff, eta, root)
    back = real_from_json(real_to_json(s))
    assert (back.base, back.coeff, back.eta, back.root) == (s.base, s.coeff, s.eta, s.root)
    assert real_from_json(real_to_json(base)) == base
