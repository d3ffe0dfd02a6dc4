from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from kappatwist.errors import MismatchedOrder, NonzeroConstantTerm, NotInvertible
from kappatwist.scalars import Series, fmt_rat, rat, series_arith, series_exp, series_inv

N = 4

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
series = st.lists(fractions, min_size=N + 1, max_size=N + 1).map(lambda c: Series(c))
nilpotent = series.map(lambda s: s - Series.const(s[0], N))
units = series.filter(lambda s: s[0] != 0)


def test_rational_normalisation():
    q = rat("6/-4")
    assert (q.numerator, q.denominator) == (-3, 2)
    assert fmt_rat(0) == "0/1"
    assert rat(Fraction(2, 6)) == mpq(1, 3)
    with pytest.raises(TypeError):
        rat(0.5)


def test_arith_examples():
    lam = Series.lam(2)
    one = Series.one(2)
    assert series_arith(one + lam, one - lam, "mul") == Series([1, 0, -1])
    assert (one + lam + Series.lam(2, 2)) * lam == Series([0, 1, 1])
    with pytest.raises(MismatchedOrder):
        series_arith(Series.one(2), Series.one(3), "add")


def test_inverse_examples():
    assert series_inv(Series.one(3)) == Series.one(3)
    assert series_inv(Series([1, 1], order=3)) == Series([1, -1, 1, -1])
    with pytest.raises(NotInvertible):
        series_inv(Series.lam(3))


def test_exp_examples():
    assert series_exp(Series.zero(2)) == Series.one(2)
    assert series_exp(Series.lam(2)) == Series([1, 1, mpq(1, 2)])
    lam = Series.lam(4)
    assert series_exp(lam) * series_exp(-lam) == Series.one(4)
    with pytest.raises(NonzeroConstantTerm):
        series_exp(Series.one(2))


@settings(max_examples=60, deadline=None)
@given(series, series, series)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + Series.zero(N) == a
    assert (a - b) + b == a


@settings(max_examples=60, deadline=None)
@given(units)
def test_inverse_identity(a):
    assert a * a.inv() == Series.one(N)


@settings(max_examples=60, deadline=None)
@given(nilpotent, nilpotent)
def test_exp_identities(a, b):
    assert a.exp() * (-a).exp() == Series.one(N)
    assert (a + b).exp() == a.exp() * b.exp()


@settings(max_examples=30, deadline=None)
@given(series)
def test_json_roundtrip(a):
    d = a.to_json()
    assert all("/" in c for c in d["coeffs"])
    assert Series.from_json(d) == a


def test_coefficients_are_reduced():
    s = Series([Fraction(4, 6), 2, "3/9"]) * Series([3, 0, 0])
    for c in s.coeffs:
        assert isinstance(c, type(mpq(0)))
    assert s == Series([2, 6, 1])
