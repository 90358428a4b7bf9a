"""Outward-rounded interval arithmetic on dyadic numbers.

An enclosure is stored as two integer mantissas sharing one binary exponent,
``[lo * 2**exp, hi * 2**exp]``.  Mantissas are kept to at most ``prec`` bits;
lower endpoints are rounded toward -inf and upper endpoints toward +inf, so
every result contains the exact value of the operation applied to any points
of the operands.  Exponents are unbounded Python integers, which is what lets
repeated squaring run far beyond double precision without overflow.
"""

from __future__ import annotations

from fractions import Fraction

Raw = tuple[int, int, int]

ZERO: Raw = (0, 0, 0)
ONE: Raw = (1, 1, 0)


def _ceil_shift(m: int, s: int) -> int:
    return -((-m) >> s)


def normalize(lo: int, hi: int, e: int, prec: int) -> Raw:
    b = max(abs(lo).bit_length(), abs(hi).bit_length())
    if b > prec:
        s = b - prec
        return lo >> s, _ceil_shift(hi, s), e + s
    return lo, hi, e


def from_rational(p: int, q: int, prec: int) -> Raw:
    """Enclose ``p/q`` (``q > 0``) with ``prec``-bit endpoints."""
    if p == 0:
        return ZERO
    if q & (q - 1) == 0:
        # power of two denominator: exact up to rounding of p itself
        return normalize(p, p, -(q.bit_length() - 1), prec)
    s = prec - (abs(p).bit_length() - q.bit_length()) + 1
    if s >= 0:
        num = p << s
        return normalize(num // q, -((-num) // q), -s, prec)
    den = q << -s
    return normalize(p // den, -((-p) // den), -s, prec)


def neg(a: Raw) -> Raw:
    return -a[1], -a[0], a[2]


def add(a: Raw, b: Raw, prec: int) -> Raw:
    alo, ahi, ae = a
    blo, bhi, be = b
    if alo == 0 and ahi == 0:
        return b
    if blo == 0 and bhi == 0:
        return a
    if ae > be:
        alo, ahi, ae, blo, bhi, be = blo, bhi, be, alo, ahi, ae
    # now ae <= be; widen b's mantissa to full precision (exact) first
    bb = max(abs(blo).bit_length(), abs(bhi).bit_length())
    if bb < prec:
        s = min(prec - bb, be - ae)
        blo <<= s
        bhi <<= s
        be -= s
    d = be - ae
    if d <= prec + 8:
        return normalize(alo + (blo << d), ahi + (bhi << d), ae, prec)
    # a sits entirely below b's last retained bit: absorb it by rounding
    return normalize((alo >> d) + blo, _ceil_shift(ahi, d) + bhi, be, prec)


def sub(a: Raw, b: Raw, prec: int) -> Raw:
    return add(a, (-b[1], -b[0], b[2]), prec)


def mul(a: Raw, b: Raw, prec: int) -> Raw:
    alo, ahi, ae = a
    blo, bhi, be = b
    if alo >= 0 and blo >= 0:
        lo, hi = alo * blo, ahi * bhi
    elif ahi <= 0 and bhi <= 0:
        lo, hi = ahi * bhi, alo * blo
    else:
        p1, p2, p3, p4 = alo * blo, alo * bhi, ahi * blo, ahi * bhi
        lo = min(p1, p2, p3, p4)
        hi = max(p1, p2, p3, p4)
    return normalize(lo, hi, ae + be, prec)


def _dyadic(m: int, e: int) -> Fraction:
    if e >= 0:
        return Fraction(m << e)
    return Fraction(m, 1 << -e)


class Interval:
    """A closed interval with dyadic endpoints."""

    __slots__ = ("lo_m", "hi_m", "exp")

    def __init__(self, lo_m: int, hi_m: int, exp: int = 0):
        if lo_m > hi_m:
            raise ValueError("empty interval")
        self.lo_m = lo_m
        self.hi_m = hi_m
        self.exp = exp

    @classmethod
    def from_raw(cls, raw: Raw) -> Interval:
        return cls(*raw)

    @classmethod
    def point(cls, value: int) -> Interval:
        return cls(value, value, 0)

    @property
    def lo(self) -> Fraction:
        return _dyadic(self.lo_m, self.exp)

    @property
    def hi(self) -> Fraction:
        return _dyadic(self.hi_m, self.exp)

    @property
    def width(self) -> Fraction:
        return _dyadic(self.hi_m - self.lo_m, self.exp)

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def sign(self) -> int | None:
        """Certified sign, or None when the interval straddles zero."""
        if self.lo_m > 0:
            return 1
        if self.hi_m < 0:
            return -1
        if self.lo_m == 0 and self.hi_m == 0:
            return 0
        return None

    def __add__(self, other: Interval) -> Interval:
        return Interval(*add(self.raw, other.raw, _PREC_ALL))

    def __sub__(self, other: Interval) -> Interval:
        return Interval(*sub(self.raw, other.raw, _PREC_ALL))

    def __neg__(self) -> Interval:
        return Interval(-self.hi_m, -self.lo_m, self.exp)

    @property
    def raw(self) -> Raw:
        return self.lo_m, self.hi_m, self.exp

    def __eq__(self, other) -> bool:
        if not isinstance(other, Interval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self) -> str:
        return f"Interval({float(self.lo)!r}, {float(self.hi)!r})"


# Operators on Interval objects are used for bookkeeping (sums of lengths),
# where keeping every bit is affordable and rounding would only add noise.
_PREC_ALL = 1 << 30
