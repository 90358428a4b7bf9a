"""Chebyshev polynomials and the combinatorics of their roots.

Roots of ``T_M`` are ``r_M(t) = cos(t*pi / 2M)`` for odd ``t`` in
``1..2M-1``.  Attaching a distinct odd prime to each variable turns subsets
of variables into divisors of ``M`` and hence into groups of roots; the
polynomial ``C_l`` collects the roots whose index is coprime to ``l``.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from . import interval as iv
from .densepoly import DensePoly, divrem
from .errors import (
    EvenArgument,
    EvenT,
    ExactDivisionFailed,
    InputError,
    TOutOfRange,
)
from .numtheory import divisors, euler_totient, is_prime
from .slp_core import Slp, SlpBuilder, compose, one_program, x_program

# --- values and dense forms -------------------------------------------------


def cheb_value(k: int, a) -> Fraction:
    """``T_k(a)`` exactly, by the three-term recursion."""
    if k < 0:
        raise InputError("k must be nonnegative")
    a = Fraction(a)
    prev, cur = Fraction(1), a
    if k == 0:
        return prev
    two_a = 2 * a
    for _ in range(k - 1):
        prev, cur = cur, two_a * cur - prev
    return cur


_table: list[list[int]] = [[1], [0, 1]]
_table_lock = threading.Lock()


def _cheb_coeffs(k: int) -> list[int]:
    if k < len(_table):
        return _table[k]
    with _table_lock:
        while len(_table) <= k:
            a, b = _table[-1], _table[-2]
            nxt = [0] + [2 * c for c in a]
            for i, c in enumerate(b):
                nxt[i] -= c
            _table.append(nxt)
    return _table[k]


def cheb_dense(k: int) -> DensePoly:
    if k < 0:
        raise InputError("k must be nonnegative")
    return DensePoly(_cheb_coeffs(k))


@lru_cache(maxsize=512)
def monic_cheb_dense(k: int) -> DensePoly:
    """``T_k / 2**(k-1)``."""
    if k < 1:
        raise InputError("monic form needs k >= 1")
    den = 1 << (k - 1)
    return DensePoly([Fraction(c, den) for c in _cheb_coeffs(k)])


# --- programs ---------------------------------------------------------------


def cheb_slp(k: int) -> Slp:
    """``T_k`` by ``T_i = 2x*T_{i-1} - T_{i-2}``; length ``2k - 1`` for k >= 2."""
    if k < 0:
        raise InputError("k must be nonnegative")
    if k == 0:
        return one_program()
    if k == 1:
        return x_program()
    b = SlpBuilder(dedupe=False)
    two_x = b.add(1, 1)
    prev, cur = 0, 1
    for _ in range(k - 1):
        prev, cur = cur, b.sub(b.mul(two_x, cur), prev)
    return b.build(cur)


def cheb_slp_factored(factors: Sequence[int]) -> Slp:
    """``T_{prod factors}`` as the composition of the ``T_f`` programs."""
    factors = list(factors)
    if not factors:
        raise InputError("need at least one factor")
    if any(f < 1 for f in factors):
        raise InputError("factors must be positive")
    prog = cheb_slp(factors[-1])
    for f in reversed(factors[:-1]):
        prog = compose(cheb_slp(f), prog)
    return prog


# --- primes, assignments, root indices --------------------------------------


@dataclass(frozen=True)
class PrimeAssignment:
    """Distinct odd primes attached to variables ``1..n``."""

    primes: tuple[int, ...]

    def __post_init__(self):
        ps = tuple(int(p) for p in self.primes)
        object.__setattr__(self, "primes", ps)
        if not ps:
            raise InputError("need at least one prime")
        if len(set(ps)) != len(ps):
            raise InputError("primes must be distinct")
        for p in ps:
            if p % 2 == 0 or not is_prime(p):
                raise InputError(f"{p} is not an odd prime")

    @classmethod
    def smallest(cls, n: int, floor: int = 3) -> PrimeAssignment:
        """The ``n`` smallest odd primes ``>= floor``."""
        from .numtheory import odd_primes

        gen = odd_primes(floor)
        return cls(tuple(next(gen) for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.primes)

    @property
    def M(self) -> int:
        return math.prod(self.primes)

    @property
    def p_min(self) -> int:
        return min(self.primes)

    @property
    def p_max(self) -> int:
        return max(self.primes)

    def prime(self, var: int) -> int:
        """Prime of the 1-based variable ``var``."""
        return self.primes[var - 1]

    def subset_from_bits(self, bits: Sequence[bool]) -> AssignmentSubset:
        return AssignmentSubset(frozenset(i + 1 for i, b in enumerate(bits) if b))


@dataclass(frozen=True)
class AssignmentSubset:
    """Variables (1-based) assigned true."""

    members: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))

    def __contains__(self, i: int) -> bool:
        return i in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class RootIndex:
    M: int
    t: int

    def __post_init__(self):
        if self.M < 1 or self.M % 2 == 0:
            raise EvenArgument(f"M must be odd and positive, got {self.M}")
        if self.t % 2 == 0:
            raise EvenT(f"t must be odd, got {self.t}")
        if not 1 <= self.t <= 2 * self.M - 1:
            raise TOutOfRange(f"t={self.t} outside 1..{2 * self.M - 1}")


def odd_indices(M: int) -> range:
    return range(1, 2 * M, 2)


def alpha(phi: AssignmentSubset, pa: PrimeAssignment) -> int:
    out = 1
    for i in phi.members:
        if not 1 <= i <= pa.n:
            raise InputError(f"variable {i} outside 1..{pa.n}")
        out *= pa.prime(i)
    return out


def root_assignment(pa: PrimeAssignment, t: int) -> AssignmentSubset:
    """Variables whose prime divides the root index ``t``."""
    RootIndex(pa.M, t)
    return AssignmentSubset(frozenset(i + 1 for i, p in enumerate(pa.primes) if t % p == 0))


def fiber(pa: PrimeAssignment, phi: AssignmentSubset) -> list[int]:
    """Odd ``t < 2M`` with ``gcd(t, M) = alpha(phi)``, ascending."""
    M = pa.M
    a = alpha(phi, pa)
    return [t for t in range(a, 2 * M, 2 * a) if math.gcd(t, M) == a]


def fiber_size(pa: PrimeAssignment, phi: AssignmentSubset) -> int:
    return euler_totient(pa.M // alpha(phi, pa))


# --- certified cosines ------------------------------------------------------


def _atan_inv(k: int, w: int) -> tuple[int, int]:
    """``2**w * atan(1/k)`` in fixed point and an error bound in ulps."""
    power = (1 << w) // k
    k2 = k * k
    total = 0
    j = 0
    while power:
        term = power // (2 * j + 1)
        total = total - term if j & 1 else total + term
        power //= k2
        j += 1
    return total, 3 * j + 3


@lru_cache(maxsize=64)
def pi_fixed(w: int) -> tuple[int, int]:
    """``(s, e)`` with ``|pi - s / 2**w| <= e / 2**w`` (Machin's formula)."""
    a, ea = _atan_inv(5, w)
    b, eb = _atan_inv(239, w)
    return 16 * a - 4 * b, 16 * ea + 4 * eb


def pi_enclosure(precision_bits: int) -> iv.Interval:
    w = precision_bits + 8
    s, e = pi_fixed(w)
    return iv.Interval(s - e, s + e, -w)


def _sin_fixed(u: int, w: int) -> tuple[int, int]:
    """Fixed-point ``sin(u / 2**w)`` for ``|u| < 2 * 2**w`` with error bound."""
    u2 = (u * u) >> w
    term = u
    total = u
    j = 1
    while term:
        term = -((term * u2) >> w) // ((2 * j) * (2 * j + 1))
        total += term
        j += 1
    # each step adds at most a couple of ulps and |u|^2/6 < 1 damps old ones
    return total, 8 * (j + 2)


def root_enclosure(ri: RootIndex, precision_bits: int) -> iv.Interval:
    """Outward-rounded enclosure of ``cos(t*pi / 2M)``, width ``<= 2**(2-prec)``."""
    if precision_bits < 2:
        raise InputError("precision_bits must be at least 2")
    M, t = ri.M, ri.t
    num = M - t  # cos(t pi/2M) = sin((M - t) pi / 2M)
    if num == 0:
        return iv.Interval(0, 0, 0)
    w = precision_bits + 24 + precision_bits.bit_length()
    s, e = pi_fixed(w)
    den = 2 * M
    # u = pi * num / den; midpoint and radius in ulps of 2**-w
    u_mid = s * num // den
    u_rad = (e * abs(num) + den - 1) // den + 1
    val, err = _sin_fixed(u_mid, w)
    rad = err + u_rad
    return iv.Interval(val - rad, val + rad, -w)


# --- the polynomials C_l ----------------------------------------------------


@lru_cache(maxsize=256)
def cyclotomic_analog_dense(ell: int) -> DensePoly:
    """Monic polynomial whose roots are ``r_l(t)`` with ``gcd(t, l) = 1``.

    Computed from ``T~_l = prod_{d | l} C_d`` by exact division.
    """
    if ell < 1 or ell % 2 == 0:
        raise EvenArgument(f"argument must be odd and positive, got {ell}")
    rest = DensePoly([1])
    for d in divisors(ell):
        if d < ell:
            rest = rest * cyclotomic_analog_dense(d)
    q, r = divrem(monic_cheb_dense(ell), rest)
    if not r.is_zero:
        raise ExactDivisionFailed(f"T~_{ell} is not divisible by its proper divisor factors")
    return q


def cyclotomic_analog_degree(ell: int) -> int:
    """Degree of ``C_l`` from the root count (totient)."""
    if ell < 1 or ell % 2 == 0:
        raise EvenArgument(f"argument must be odd and positive, got {ell}")
    return sum(1 for t in odd_indices(ell) if math.gcd(t, ell) == 1)


def product(polys: Iterable[DensePoly]) -> DensePoly:
    out = DensePoly([1])
    for p in polys:
        out = out * p
    return out
