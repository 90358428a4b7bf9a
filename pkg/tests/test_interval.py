from fractions import Fraction

from hypothesis import given, strategies as st

from _strategies import rationals
from slpreduce import interval as iv
from slpreduce.interval import Interval

precs = st.sampled_from([16, 24, 53, 100])


def enclosure(draw_raw) -> Interval:
    return Interval.from_raw(draw_raw)


@given(rationals(10**6, 10**6), precs)
def test_from_rational_encloses(a, prec):
    enc = enclosure(iv.from_rational(a.numerator, a.denominator, prec))
    assert enc.contains(a)
    if a:
        assert enc.width <= abs(a) * Fraction(2, 2**prec) * 4


@given(rationals(10**4, 999), rationals(10**4, 999), precs)
def test_operations_enclose(a, b, prec):
    ra = iv.from_rational(a.numerator, a.denominator, prec)
    rb = iv.from_rational(b.numerator, b.denominator, prec)
    assert enclosure(iv.add(ra, rb, prec)).contains(a + b)
    assert enclosure(iv.sub(ra, rb, prec)).contains(a - b)
    assert enclosure(iv.mul(ra, rb, prec)).contains(a * b)


@given(st.integers(-10**9, 10**9), st.integers(-400, 400), st.integers(-10**9, 10**9), precs)
def test_add_far_apart_exponents(m, e, n, prec):
    # the small operand must still pull the bounds outward, never inward
    a = (m, m, e)
    b = (n, n, 0)
    exact = iv._dyadic(m, e) + n
    assert enclosure(iv.add(a, b, prec)).contains(exact)


@given(st.integers(-2**80, 2**80), st.integers(0, 2**80), st.integers(-50, 50), precs)
def test_normalize_rounds_outward(lo, width, e, prec):
    hi = lo + width
    nlo, nhi, ne = iv.normalize(lo, hi, e, prec)
    assert max(abs(nlo), abs(nhi)).bit_length() <= prec + 1
    assert iv._dyadic(nlo, ne) <= iv._dyadic(lo, e)
    assert iv._dyadic(nhi, ne) >= iv._dyadic(hi, e)


def test_sign_and_point():
    assert Interval.point(3).sign() == 1
    assert Interval(-1, 2, -3).sign() is None
    assert Interval(0, 0, 5).sign() == 0
    assert (Interval.point(2) - Interval.point(5)).sign() == -1
    assert Interval(1, 3, -1).midpoint == 1
