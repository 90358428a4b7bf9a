"""Exact dense univariate polynomials over Q.

Coefficients are stored lowest degree first.  Integral coefficients are kept
as ``int`` and the rest as ``Fraction`` so that integer work (the common
case for expanded programs) never pays for rational normalisation.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .errors import (
    BothZero,
    DivisionByZeroPoly,
    NonIntegerCoefficients,
    PolySyntaxError,
    RootAtEndpoint,
    ZeroPolynomial,
)


def _norm(c):
    if isinstance(c, int):
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def _strip(cs: list) -> list:
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


class DensePoly:
    """Immutable polynomial with exact rational coefficients."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", tuple(_strip([_norm(c) for c in coeffs])))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("DensePoly is immutable")

    @classmethod
    def constant(cls, c) -> DensePoly:
        return cls([c])

    @classmethod
    def x(cls) -> DensePoly:
        return cls([0, 1])

    @classmethod
    def monomial(cls, degree: int, c=1) -> DensePoly:
        return cls([0] * degree + [c])

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, DensePoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == DensePoly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self.coeffs))
        return self._hash

    def __repr__(self) -> str:
        return f"DensePoly({to_text(self)})"

    def __call__(self, a):
        """Exact value at ``a`` (Horner)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * a + c
        return _norm(acc) if isinstance(acc, (int, Fraction)) else acc

    def __neg__(self) -> DensePoly:
        return DensePoly([-c for c in self.coeffs])

    def __add__(self, other) -> DensePoly:
        return add(self, _lift(other))

    __radd__ = __add__

    def __sub__(self, other) -> DensePoly:
        return sub(self, _lift(other))

    def __rsub__(self, other) -> DensePoly:
        return sub(_lift(other), self)

    def __mul__(self, other) -> DensePoly:
        if isinstance(other, (int, Fraction)):
            return scale(self, other)
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> DensePoly:
        result = DensePoly([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other: DensePoly):
        return divrem(self, other)

    def __floordiv__(self, other: DensePoly) -> DensePoly:
        return divrem(self, other)[0]

    def __mod__(self, other: DensePoly) -> DensePoly:
        return divrem(self, other)[1]


def _lift(obj) -> DensePoly:
    if isinstance(obj, DensePoly):
        return obj
    return DensePoly([obj])


# --- integer coefficient kernels -------------------------------------------


def _schoolbook(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def int_poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Product of integer coefficient lists (Kronecker substitution when large)."""
    if not a or not b:
        return []
    if len(a) == 1:
        c = a[0]
        return [c * y for y in b]
    if len(b) == 1:
        c = b[0]
        return [c * x for x in a]
    if min(len(a), len(b)) < 16:
        return _strip(_schoolbook(a, b))
    ma = max(abs(x) for x in a)
    mb = max(abs(y) for y in b)
    slot = ma.bit_length() + mb.bit_length() + min(len(a), len(b)).bit_length() + 2
    va = _pack(a, slot)
    vb = _pack(b, slot)
    return _strip(_unpack(va * vb, slot, len(a) + len(b) - 1))


def _pack(cs: Sequence[int], slot: int) -> int:
    v = 0
    for c in reversed(cs):
        v = (v << slot) + c
    return v


def _unpack(v: int, slot: int, n: int) -> list[int]:
    mask = (1 << slot) - 1
    half = 1 << (slot - 1)
    out = []
    for _ in range(n):
        d = v & mask
        if d >= half:
            d -= 1 << slot
        out.append(d)
        v = (v - d) >> slot
    return out


# --- ring operations --------------------------------------------------------


def add(f: DensePoly, g: DensePoly) -> DensePoly:
    a, b = f.coeffs, g.coeffs
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return DensePoly(out)


def sub(f: DensePoly, g: DensePoly) -> DensePoly:
    return add(f, -g)


def scale(f: DensePoly, c) -> DensePoly:
    return DensePoly([c * x for x in f.coeffs])


def mul(f: DensePoly, g: DensePoly) -> DensePoly:
    if f.is_zero or g.is_zero:
        return DensePoly()
    if f.is_integral() and g.is_integral():
        return DensePoly(int_poly_mul(f.coeffs, g.coeffs))
    # clear denominators, multiply over Z, rescale
    cf, pf = _split_denominator(f)
    cg, pg = _split_denominator(g)
    return DensePoly([Fraction(c, cf * cg) for c in int_poly_mul(pf, pg)])


def _split_denominator(f: DensePoly) -> tuple[int, list[int]]:
    den = 1
    for c in f.coeffs:
        if isinstance(c, Fraction):
            den = den * c.denominator // math.gcd(den, c.denominator)
    if den == 1:
        return 1, list(f.coeffs)
    return den, [int(c * den) for c in f.coeffs]


def divrem(f: DensePoly, g: DensePoly) -> tuple[DensePoly, DensePoly]:
    """Euclidean division ``f = q*g + r`` with ``deg r < deg g``."""
    if g.is_zero:
        raise DivisionByZeroPoly("division by the zero polynomial")
    dg = g.degree
    r = list(f.coeffs)
    if len(r) <= dg:
        return DensePoly(), f
    lc = g.lc
    gc = g.coeffs
    integral = f.is_integral() and g.is_integral()
    q = [0] * (len(r) - dg)
    for i in range(len(r) - 1, dg - 1, -1):
        c = r[i]
        if not c:
            continue
        if integral and c % lc == 0:
            t = c // lc
        else:
            integral = False
            t = Fraction(c) / lc
        q[i - dg] = t
        base = i - dg
        for j in range(dg):
            r[base + j] -= t * gc[j]
        r[i] = 0
    return DensePoly(q), DensePoly(r[:dg])


def exact_div(f: DensePoly, g: DensePoly) -> DensePoly:
    q, r = divrem(f, g)
    if not r.is_zero:
        raise ArithmeticError("division is not exact")
    return q


def divides(g: DensePoly, f: DensePoly) -> bool:
    return divrem(f, g)[1].is_zero


def derivative(f: DensePoly) -> DensePoly:
    return DensePoly([i * c for i, c in enumerate(f.coeffs)][1:])


def compose(f: DensePoly, g: DensePoly) -> DensePoly:
    """``f(g(x))`` by Horner."""
    acc = DensePoly()
    for c in reversed(f.coeffs):
        acc = acc * g + DensePoly([c])
    return acc


def monic(f: DensePoly) -> DensePoly:
    if f.is_zero:
        return f
    lc = f.lc
    if lc == 1:
        return f
    return DensePoly([Fraction(c) / lc for c in f.coeffs])


# --- content and primitive part ---------------------------------------------


def content(f: DensePoly) -> Fraction:
    """Rational ``c`` with ``f = c * primitive_part(f)``; sign follows lc."""
    if f.is_zero:
        raise ZeroPolynomial("content of the zero polynomial")
    den, ints = _split_denominator(f)
    g = math.gcd(*ints)
    c = Fraction(g, den)
    return c if ints[-1] > 0 else -c


def primitive_part(f: DensePoly) -> DensePoly:
    """Integer polynomial with coprime coefficients and positive lc."""
    if f.is_zero:
        raise ZeroPolynomial("primitive part of the zero polynomial")
    return DensePoly(_primitive_ints(f))


def _primitive_ints(f: DensePoly) -> list[int]:
    _, ints = _split_denominator(f)
    g = math.gcd(*ints)
    if ints[-1] < 0:
        g = -g
    return [c // g for c in ints]


# --- gcd --------------------------------------------------------------------


def _int_divides(g: Sequence[int], f: Sequence[int]) -> bool:
    """Whether ``g | f`` in Z[x]."""
    r = list(f)
    dg = len(g) - 1
    lc = g[-1]
    for i in range(len(r) - 1, dg - 1, -1):
        c = r[i]
        if not c:
            continue
        if c % lc:
            return False
        t = c // lc
        base = i - dg
        for j in range(dg):
            r[base + j] -= t * g[j]
    return not any(r[:dg])


def _interpolate(h: int, xi: int) -> list[int]:
    out = []
    half = xi // 2
    while h:
        d = h % xi
        if d > half:
            d -= xi
        out.append(d)
        h = (h - d) // xi
    return out


def _eval_int(cs: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def _heuristic_gcd(f: list[int], g: list[int]) -> list[int] | None:
    """Evaluate-interpolate gcd of primitive integer polynomials.

    A candidate is accepted only after exact trial division of both inputs,
    so a returned value is always correct; ``None`` means no luck.
    """
    nf = max(abs(c) for c in f)
    ng = max(abs(c) for c in g)
    bound = 2 * min(nf, ng) + 29
    xi = max(min(bound, 99 * math.isqrt(bound)),
             2 * min(nf // abs(f[-1]), ng // abs(g[-1])) + 2)
    for _ in range(6):
        h = math.gcd(_eval_int(f, xi), _eval_int(g, xi))
        if h:
            cand = _interpolate(h, xi)
            if cand:
                cont = math.gcd(*cand)
                if cand[-1] < 0:
                    cont = -cont
                cand = [c // cont for c in cand]
                if _int_divides(cand, f) and _int_divides(cand, g):
                    return cand
        xi = xi * 73794 * math.isqrt(math.isqrt(xi)) // 27011
    return None


def _euclid_gcd(f: DensePoly, g: DensePoly) -> DensePoly:
    a, b = monic(f), monic(g)
    while not b.is_zero:
        a, b = b, monic(divrem(a, b)[1])
    return a


def gcd(f: DensePoly, g: DensePoly) -> DensePoly:
    """Monic gcd over Q."""
    if f.is_zero and g.is_zero:
        raise BothZero("gcd of two zero polynomials")
    if f.is_zero:
        return monic(g)
    if g.is_zero:
        return monic(f)
    if f.degree == 0 or g.degree == 0:
        return DensePoly([1])
    pf, pg = _primitive_ints(f), _primitive_ints(g)
    h = _heuristic_gcd(pf, pg)
    if h is not None:
        return monic(DensePoly(h))
    return _euclid_gcd(f, g)


def lcm(f: DensePoly, g: DensePoly) -> DensePoly:
    """Monic lcm over Q."""
    if f.is_zero and g.is_zero:
        raise BothZero("lcm of two zero polynomials")
    if f.is_zero or g.is_zero:
        return DensePoly()
    h = gcd(f, g)
    return monic(exact_div(monic(f), h) * monic(g))


def gcd_many(polys: Iterable[DensePoly]) -> DensePoly:
    return reduce(gcd, polys)


def lcm_many(polys: Iterable[DensePoly]) -> DensePoly:
    return reduce(lcm, polys)


# --- squarefree decomposition -----------------------------------------------


def _int_exact_div(f: list[int], g: list[int]) -> list[int]:
    r = list(f)
    dg = len(g) - 1
    lc = g[-1]
    q = [0] * (len(f) - dg)
    for i in range(len(r) - 1, dg - 1, -1):
        c = r[i]
        if not c:
            continue
        t, rem = divmod(c, lc)
        if rem:
            raise ArithmeticError("integer division is not exact")
        q[i - dg] = t
        base = i - dg
        for j in range(dg):
            r[base + j] -= t * g[j]
    if any(r[:dg]):
        raise ArithmeticError("integer division is not exact")
    return q


def squarefree_part(f: DensePoly) -> DensePoly:
    """Primitive integer polynomial of ``f / gcd(f, f')``, lc > 0."""
    if f.is_zero:
        raise ZeroPolynomial("squarefree part of the zero polynomial")
    if f.degree <= 0:
        return DensePoly([1])
    pf = _primitive_ints(f)
    g = _primitive_ints(gcd(f, derivative(f)))
    return DensePoly(_int_exact_div(pf, g))


def squarefree_decomposition(f: DensePoly) -> list[tuple[DensePoly, int]]:
    """Yun's algorithm: ``[(a_i, i)]`` with ``f ∝ prod a_i**i``, each ``a_i``
    primitive, squarefree and pairwise coprime; trivial layers omitted."""
    if f.is_zero:
        raise ZeroPolynomial("squarefree decomposition of the zero polynomial")
    if f.degree <= 0:
        return []
    pf = _primitive_ints(f)
    dpf = [i * c for i, c in enumerate(pf)][1:]
    a0 = _primitive_ints(gcd(DensePoly(pf), DensePoly(dpf)))
    b = _int_exact_div(pf, a0)
    c = _exact_div_q(DensePoly(dpf), DensePoly(a0))
    d = c - derivative(DensePoly(b))
    layers = []
    i = 1
    while len(b) > 1:
        a = _primitive_ints(gcd(DensePoly(b), d)) if not d.is_zero else list(b)
        if len(a) > 1:
            layers.append((DensePoly(a), i))
        b_next = _int_exact_div(b, a)
        c = _exact_div_q(d, DensePoly(a))
        d = c - derivative(DensePoly(b_next))
        b = b_next
        i += 1
    return layers


def _exact_div_q(f: DensePoly, g: DensePoly) -> DensePoly:
    q, r = divrem(f, g)
    if not r.is_zero:
        raise ArithmeticError("division is not exact")
    return q


# --- Sturm sequences and root counting --------------------------------------


def _prem_neg(a: list[int], b: list[int]) -> list[int]:
    """Positive multiple of ``-rem(a, b)`` in Z[x], made primitive."""
    r = list(a)
    db = len(b) - 1
    lc = b[-1]
    delta = len(a) - len(b)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i]
        base = i - db
        # multiply every step so the total factor is exactly lc**(delta+1)
        r = [lc * x for x in r]
        if c:
            for j in range(db):
                r[base + j] -= c * b[j]
        r.pop()
    _strip(r)
    if not r:
        return r
    # r = lc**(delta+1) * rem(a, b); flip so the multiplier is positive
    if lc < 0 and (delta + 1) % 2 == 1:
        pass
    else:
        r = [-x for x in r]
    g = math.gcd(*r)
    return [x // g for x in r]


def sturm_sequence(f: DensePoly) -> list[list[int]]:
    """Sturm chain of ``f`` as integer lists, each a positive multiple of the
    classical remainder chain."""
    if f.is_zero:
        raise ZeroPolynomial("Sturm sequence of the zero polynomial")
    den, s0 = _split_denominator(f)
    g = math.gcd(*s0)
    s0 = [c // abs(g) for c in s0]
    seq = [s0]
    if len(s0) == 1:
        return seq
    s1 = [i * c for i, c in enumerate(s0)][1:]
    g = math.gcd(*s1)
    s1 = [c // abs(g) for c in s1]
    seq.append(s1)
    while len(seq[-1]) > 1:
        nxt = _prem_neg(seq[-2], seq[-1])
        if not nxt:
            break
        seq.append(nxt)
    return seq


def _sign_at(cs: Sequence[int], a: Fraction) -> int:
    p, q = a.numerator, a.denominator
    acc = 0
    qp = 1
    # homogenised Horner: sum c_i p^i q^(d-i), q > 0 keeps the sign
    for c in reversed(cs):
        acc = acc * p + c * qp
        qp *= q
    return (acc > 0) - (acc < 0)


def _variations(seq: Sequence[Sequence[int]], a: Fraction) -> int:
    count = 0
    last = 0
    for cs in seq:
        s = _sign_at(cs, a)
        if s:
            if last and s != last:
                count += 1
            last = s
    return count


def sturm_count(f: DensePoly, a, b) -> int:
    """Number of distinct real roots of ``f`` in the open interval (a, b)."""
    a, b = Fraction(a), Fraction(b)
    if f.is_zero:
        raise ZeroPolynomial("root count of the zero polynomial")
    if not a < b:
        raise ValueError("need a < b")
    if f(a) == 0 or f(b) == 0:
        raise RootAtEndpoint("f vanishes at an endpoint")
    seq = sturm_sequence(f)
    return _variations(seq, a) - _variations(seq, b)


def cauchy_bound(f: DensePoly) -> Fraction:
    """``1 + max |c_i / c_d|``; every complex root is strictly inside."""
    if f.is_zero:
        raise ZeroPolynomial("root bound of the zero polynomial")
    lc = abs(Fraction(f.lc))
    if f.degree == 0:
        return Fraction(1)
    return 1 + max(abs(Fraction(c)) for c in f.coeffs[:-1]) / lc


def _safe_bound(f: DensePoly) -> Fraction:
    bound = Fraction(math.ceil(cauchy_bound(f)))
    while f(bound) == 0 or f(-bound) == 0:
        bound *= 2
    return bound


def count_distinct_real_roots(f: DensePoly) -> int:
    if f.is_zero:
        raise ZeroPolynomial("root count of the zero polynomial")
    if f.degree <= 0:
        return 0
    bound = _safe_bound(f)
    return sturm_count(f, -bound, bound)


def count_real_roots_with_multiplicity(f: DensePoly) -> int:
    """Real roots of ``f`` counted with multiplicity."""
    if f.is_zero:
        raise ZeroPolynomial("root count of the zero polynomial")
    return sum(m * count_distinct_real_roots(layer) for layer, m in squarefree_decomposition(f))


# --- bridge to straight-line programs ---------------------------------------


def horner_slp(f: DensePoly):
    """SLP computing the integer polynomial ``f`` by Horner's rule."""
    from .slp_core import SlpBuilder

    if not f.is_integral():
        raise NonIntegerCoefficients("horner_slp needs integer coefficients")
    b = SlpBuilder()
    cs = f.coeffs
    if not cs:
        return b.build(b.zero())
    acc = b.integer(cs[-1])
    for c in reversed(cs[:-1]):
        acc = 1 if acc == 0 else b.mul(acc, 1)
        if c > 0:
            acc = b.add(acc, b.integer(c))
        elif c < 0:
            acc = b.sub(acc, b.integer(-c))
    return b.build(acc)


# --- text format ------------------------------------------------------------


def to_text(f: DensePoly) -> str:
    if f.is_zero:
        return "0"
    return ",".join(str(c) for c in f.coeffs)


def from_text(text: str) -> DensePoly:
    text = text.strip()
    if not text:
        raise PolySyntaxError("empty polynomial text")
    out = []
    for i, tok in enumerate(text.split(",")):
        try:
            if not tok or " " in tok:
                raise ValueError
            out.append(Fraction(tok))
        except (ValueError, ZeroDivisionError):
            raise PolySyntaxError(f"bad coefficient {i}: {tok!r}") from None
    return DensePoly(out)
