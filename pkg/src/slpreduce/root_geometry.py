"""How the roots ``r_N(t)`` cut up (-1, 1), computed from root indices only.

Roots are listed with DECREASING ``t`` so that their values increase from
left to right; interval ``I_j`` sits between the ``j``-th and ``(j+1)``-th
root (with -1 and +1 closing the ends).  An interval is simple when its two
endpoints are neighbouring roots of ``T_N``, i.e. their indices differ by 2.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .cheb import RootIndex, root_enclosure
from .errors import (
    DuplicateRoot,
    EvenT,
    IndexOutOfRange,
    InputError,
    PrecisionExhausted,
    TOutOfRange,
)

DEFAULT_PRECISION_CAP = 1 << 16


@dataclass(frozen=True)
class RationalEnclosure:
    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __repr__(self) -> str:
        return f"[{float(self.lo):.15g}, {float(self.hi):.15g}]"


@dataclass(frozen=True)
class IntervalPartition:
    N: int
    root_ts: tuple[int, ...]

    @property
    def K(self) -> int:
        return len(self.root_ts)

    def endpoints(self, j: int) -> tuple[int | None, int | None]:
        """Root indices bounding ``I_j``; ``None`` stands for -1 or +1."""
        if not 0 <= j <= self.K:
            raise IndexOutOfRange(f"interval {j} outside 0..{self.K}")
        left = self.root_ts[j - 1] if j > 0 else None
        right = self.root_ts[j] if j < self.K else None
        return left, right

    @property
    def intervals(self) -> list[tuple[int | None, int | None]]:
        return [self.endpoints(j) for j in range(self.K + 1)]


def build_partition(N: int, root_ts: Iterable[int]) -> IntervalPartition:
    if N < 1 or N % 2 == 0:
        raise InputError(f"N must be odd and positive, got {N}")
    ts = list(root_ts)
    for t in ts:
        if t % 2 == 0:
            raise EvenT(f"root index {t} is even")
        if not 1 <= t <= 2 * N - 1:
            raise TOutOfRange(f"root index {t} outside 1..{2 * N - 1}")
    if len(set(ts)) != len(ts):
        raise DuplicateRoot("root indices repeat")
    return IntervalPartition(N, tuple(sorted(ts, reverse=True)))


def coprime_partition(N: int) -> IntervalPartition:
    """Partition by the roots of ``C_N``."""
    return build_partition(N, (t for t in range(1, 2 * N, 2) if math.gcd(t, N) == 1))


def classify_simple(partition: IntervalPartition, j: int) -> bool:
    left, right = partition.endpoints(j)
    return left is not None and right is not None and left - right == 2


# --- certified lengths ------------------------------------------------------


def _endpoint_bounds(N: int, t: int, prec: int) -> tuple[int, int, int]:
    e = root_enclosure(RootIndex(N, t), prec)
    return e.lo_m, e.hi_m, e.exp


def _common_exp(prec: int) -> int:
    # root_enclosure uses 2**-(prec + 24 + bitlen(prec)) as its unit
    return -(prec + 24 + prec.bit_length())


def _scaled(b: tuple[int, int, int], exp: int) -> tuple[int, int]:
    lo, hi, e = b
    s = e - exp
    return lo << s, hi << s


class _Lengths:
    """Certified lengths of every interval at one precision, as integer
    mantissas over a shared power of two."""

    def __init__(self, partition: IntervalPartition, prec: int):
        self.exp = _common_exp(prec)
        N = partition.N
        bounds = [(-1 << -self.exp, -1 << -self.exp)]
        bounds += [_scaled(_endpoint_bounds(N, t, prec), self.exp) for t in partition.root_ts]
        bounds.append((1 << -self.exp, 1 << -self.exp))
        self.lo = [bounds[j + 1][0] - bounds[j][1] for j in range(partition.K + 1)]
        self.hi = [bounds[j + 1][1] - bounds[j][0] for j in range(partition.K + 1)]

    def total(self, js: Iterable[int]) -> RationalEnclosure:
        lo = hi = 0
        for j in js:
            lo += max(self.lo[j], 0)
            hi += self.hi[j]
        unit = Fraction(1, 1 << -self.exp)
        return RationalEnclosure(lo * unit, hi * unit)


def _adaptive_total(partition: IntervalPartition, js: Sequence[int], tol, cap: int) -> RationalEnclosure:
    tol = Fraction(tol)
    if tol <= 0:
        raise InputError("tolerance must be positive")
    prec = 64
    while True:
        enc = _Lengths(partition, prec).total(js)
        if enc.width <= tol:
            return enc
        if prec >= cap:
            raise PrecisionExhausted(f"tolerance {float(tol)} not reached at {prec} bits")
        prec *= 2


def interval_length(partition: IntervalPartition, j: int, tol=Fraction(1, 10**12)) -> RationalEnclosure:
    partition.endpoints(j)
    return _adaptive_total(partition, [j], tol, DEFAULT_PRECISION_CAP)


def total_length(partition: IntervalPartition, tol=Fraction(1, 10**9)) -> RationalEnclosure:
    return _adaptive_total(partition, range(partition.K + 1), tol, DEFAULT_PRECISION_CAP)


def non_simple_mass(partition: IntervalPartition, tol=Fraction(1, 10**9),
                    cap: int = DEFAULT_PRECISION_CAP) -> RationalEnclosure:
    js = [j for j in range(partition.K + 1) if not classify_simple(partition, j)]
    return _adaptive_total(partition, js, tol, cap)


def odd_mass(partition: IntervalPartition, tol=Fraction(1, 10**9),
             cap: int = DEFAULT_PRECISION_CAP) -> RationalEnclosure:
    return _adaptive_total(partition, range(1, partition.K + 1, 2), tol, cap)


@dataclass(frozen=True)
class MassReport:
    simple_even: RationalEnclosure
    simple_odd: RationalEnclosure
    odd: RationalEnclosure
    non_simple: RationalEnclosure


def mass_report(partition: IntervalPartition, tol=Fraction(1, 10**9),
                cap: int = DEFAULT_PRECISION_CAP) -> MassReport:
    K = partition.K
    simple = [classify_simple(partition, j) for j in range(K + 1)]
    groups = [
        [j for j in range(K + 1) if simple[j] and j % 2 == 0],
        [j for j in range(K + 1) if simple[j] and j % 2 == 1],
        list(range(1, K + 1, 2)),
        [j for j in range(K + 1) if not simple[j]],
    ]
    tol = Fraction(tol)
    prec = 64
    while True:
        lengths = _Lengths(partition, prec)
        encs = [lengths.total(g) for g in groups]
        if all(e.width <= tol for e in encs):
            return MassReport(*encs)
        if prec >= cap:
            raise PrecisionExhausted(f"tolerance {float(tol)} not reached at {prec} bits")
        prec *= 2


# --- neighbouring simple intervals ------------------------------------------


def adjacent_simple_ratio(N: int, t: int, precision_bits: int = 64) -> RationalEnclosure:
    """Enclosure of ``(r(t) - r(t+2)) / (r(t+2) - r(t+4))`` for roots of ``T_N``."""
    if t % 2 == 0:
        raise EvenT(f"t must be odd, got {t}")
    if t < 1 or t + 4 > 2 * N - 1:
        raise TOutOfRange(f"need 1 <= t and t+4 <= {2 * N - 1}")
    prec = precision_bits
    while True:
        a, b, c = (root_enclosure(RootIndex(N, s), prec) for s in (t, t + 2, t + 4))
        num_lo, num_hi = a.lo - b.hi, a.hi - b.lo
        den_lo, den_hi = b.lo - c.hi, b.hi - c.lo
        if num_lo > 0 and den_lo > 0:
            return RationalEnclosure(num_lo / den_hi, num_hi / den_lo)
        if prec >= DEFAULT_PRECISION_CAP:
            raise PrecisionExhausted("could not separate neighbouring roots")
        prec *= 2


def ratio_sweep_float(N: int):
    """All neighbouring-interval ratios for ``T_N`` in double precision.

    Uses ``cos a - cos b = 2 sin((a+b)/2) sin((b-a)/2)``, so the ratio for
    ``t`` is ``sin((t+1)h) / sin((t+3)h)`` with ``h = pi/2N``; every sine
    argument lies in ``(0, pi)`` away from both ends and the quotient is
    accurate to a few ulps.
    """
    import numpy as np

    if N < 3:
        return np.empty(0)
    t = np.arange(1, 2 * N - 4, 2, dtype=np.float64)
    h = np.pi / (2 * N)
    return np.sin((t + 1) * h) / np.sin((t + 3) * h)


# --- grid sampling ----------------------------------------------------------


@dataclass(frozen=True)
class GridReport:
    M: int
    grid_size: int
    success_count: int
    zero_hits: int

    @property
    def success_ratio(self) -> Fraction:
        return Fraction(self.success_count, self.grid_size)


def grid_floor(N: int, t: int, scale: int, cap: int = DEFAULT_PRECISION_CAP) -> tuple[int, bool]:
    """``(floor(scale * r_N(t)), exact)``; ``exact`` when the product is an
    integer (only for the root 0)."""
    ri = RootIndex(N, t)
    if t == N:
        return 0, True
    prec = max(64, 2 * scale.bit_length() + 32)
    while True:
        e = root_enclosure(ri, prec)
        # floor(scale * m * 2**exp) at both ends; exp is negative
        s = -e.exp
        lo = (scale * e.lo_m) >> s
        hi = (scale * e.hi_m) >> s
        hi_exact = (scale * e.hi_m) & ((1 << s) - 1) == 0
        if lo == hi and not hi_exact:
            return lo, False
        if prec >= cap:
            raise PrecisionExhausted(f"grid boundary for t={t} unresolved at {prec} bits")
        prec *= 2


def grid_success_count(partition: IntervalPartition, M: int, sign_at_one: int,
                       cap: int = DEFAULT_PRECISION_CAP) -> GridReport:
    """Exact count of ``K`` in ``[-M^4, M^4]`` where the sign at ``K/M^4``
    differs from the sign at 1.

    With simple roots and no other sign change, the sign at ``a`` relative
    to the sign at 1 is ``(-1)**(number of roots above a)``.
    """
    if M < 3:
        raise InputError("M must be at least 3")
    if sign_at_one not in (-1, 1):
        raise InputError("sign at 1 must be -1 or +1")
    scale = M**4
    grid_size = 2 * scale + 1
    K = partition.K
    below = [0]  # grid points strictly left of each boundary
    hits = [0]
    for t in partition.root_ts:
        f, exact = grid_floor(partition.N, t, scale, cap)
        below.append(f + scale + (0 if exact else 1))
        hits.append(1 if exact else 0)
    below.append(grid_size)
    hits.append(0)
    success = 0
    zero_hits = sum(hits)
    for j in range(K + 1):
        pts = below[j + 1] - below[j] - hits[j]
        if (K - j) % 2 == 1:
            success += pts
    return GridReport(M, grid_size, success, zero_hits)


# --- export -----------------------------------------------------------------


def partition_csv(partition: IntervalPartition) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "t_left", "t_right", "simple", "approx_length"])
    tol = Fraction(1, 10**13)
    prec = 64
    while True:
        lengths = _Lengths(partition, prec)
        if all(lengths.hi[j] - lengths.lo[j] <= tol * (1 << -lengths.exp) for j in range(partition.K + 1)):
            break
        prec *= 2
    unit = Fraction(1, 1 << -lengths.exp)
    for j in range(partition.K + 1):
        left, right = partition.endpoints(j)
        mid = (lengths.lo[j] + lengths.hi[j]) * unit / 2
        w.writerow([
            j,
            "" if left is None else left,
            "" if right is None else right,
            "true" if classify_simple(partition, j) else "false",
            f"{float(mid):.12f}",
        ])
    return buf.getvalue()
