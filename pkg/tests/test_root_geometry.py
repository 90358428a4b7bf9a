import csv
import io
import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from slpreduce import root_geometry as rg
from slpreduce.errors import DuplicateRoot, EvenT, IndexOutOfRange, TOutOfRange

F = Fraction
TOL = F(1, 10**9)


def cos_root(N, t):
    return mpmath.cospi(mpmath.mpf(t) / (2 * N))


@st.composite
def partitions(draw, max_n=25):
    N = 2 * draw(st.integers(0, max_n)) + 1
    ts = draw(st.sets(st.integers(0, N - 1).map(lambda i: 2 * i + 1)))
    return rg.build_partition(N, ts)


class TestPartition:
    def test_three_intervals(self):
        p = rg.build_partition(3, [5, 1])
        assert p.K == 2 and p.intervals == [(None, 5), (5, 1), (1, None)]
        mid = rg.interval_length(p, 1)
        assert mid.contains(F(0)) is False
        assert abs(float(mid.midpoint) - math.sqrt(3)) < 1e-12

    def test_empty(self):
        p = rg.build_partition(7, [])
        assert p.intervals == [(None, None)]
        assert rg.non_simple_mass(p).contains(2)

    def test_coprime(self):
        p = rg.coprime_partition(5)
        assert p.root_ts == (9, 7, 3, 1) and len(p.intervals) == 5

    def test_errors(self):
        with pytest.raises(EvenT):
            rg.build_partition(3, [2])
        with pytest.raises(TOutOfRange):
            rg.build_partition(3, [7])
        with pytest.raises(DuplicateRoot):
            rg.build_partition(3, [1, 1])
        with pytest.raises(IndexOutOfRange):
            rg.build_partition(3, [1]).endpoints(2)

    def test_simple_classification(self):
        p3 = rg.build_partition(3, [5, 1])
        assert not rg.classify_simple(p3, 1)
        p5 = rg.build_partition(5, [9, 7])
        assert rg.classify_simple(p5, 1)
        assert not rg.classify_simple(p5, 0) and not rg.classify_simple(p5, 2)


class TestMasses:
    def test_pieces_sum_to_two(self):
        p = rg.build_partition(3, [5, 1])
        rep = rg.mass_report(p)
        total = rg.total_length(p)
        assert total.contains(2)
        simple = rep.simple_even.midpoint + rep.simple_odd.midpoint
        assert abs(rep.non_simple.midpoint - (2 - simple)) < TOL * 4

    def test_odd_mass_examples(self):
        assert rg.odd_mass(rg.build_partition(5, [])).hi == 0
        enc = rg.odd_mass(rg.build_partition(1, [1]))
        assert enc.contains(1)

    @given(partitions())
    def test_lengths_against_mpmath(self, p):
        bounds = [mpmath.mpf(-1)] + [cos_root(p.N, t) for t in p.root_ts] + [mpmath.mpf(1)]
        for j in range(p.K + 1):
            enc = rg.interval_length(p, j)
            exact = bounds[j + 1] - bounds[j]
            assert exact > 0
            lo = mpmath.mpf(enc.lo.numerator) / enc.lo.denominator
            hi = mpmath.mpf(enc.hi.numerator) / enc.hi.denominator
            assert lo <= exact <= hi

    @given(partitions())
    def test_masses_consistent(self, p):
        rep = rg.mass_report(p)
        total = rep.simple_even.midpoint + rep.simple_odd.midpoint + rep.non_simple.midpoint
        assert abs(total - 2) < 4 * TOL
        assert rep.odd.lo <= rg.odd_mass(p).hi


class TestRatios:
    def test_n5(self):
        enc = rg.adjacent_simple_ratio(5, 1)
        want = math.sin(2 * math.pi / 10) / math.sin(4 * math.pi / 10)
        assert enc.contains(F(want)) or abs(float(enc.midpoint) - want) < 1e-15
        assert abs(want - 0.618) < 1e-3

    def test_reflection(self):
        # ratios for t and for the mirrored neighbour pair are reciprocal
        N = 11
        for t in range(1, 2 * N - 4, 2):
            a = rg.adjacent_simple_ratio(N, t)
            b = rg.adjacent_simple_ratio(N, 2 * N - 4 - t)
            assert a.lo * b.lo <= 1 <= a.hi * b.hi

    @given(st.integers(3, 300).map(lambda i: 2 * i + 1), st.data())
    def test_certified_ratio_vs_float(self, N, data):
        t = 2 * data.draw(st.integers(0, N - 3)) + 1
        enc = rg.adjacent_simple_ratio(N, t)
        want = rg.ratio_sweep_float(N)[(t - 1) // 2]
        assert float(enc.lo) - 1e-12 <= want <= float(enc.hi) + 1e-12
        assert enc.width < F(1, 10**12)

    def test_errors(self):
        with pytest.raises(EvenT):
            rg.adjacent_simple_ratio(7, 2)
        with pytest.raises(TOutOfRange):
            rg.adjacent_simple_ratio(7, 11)


class TestGrid:
    def test_no_roots(self):
        rep = rg.grid_success_count(rg.build_partition(5, []), 3, 1)
        assert rep.success_count == 0 and rep.grid_size == 163

    def test_single_root_at_zero(self):
        rep = rg.grid_success_count(rg.build_partition(1, [1]), 3, 1)
        assert (rep.grid_size, rep.success_count, rep.zero_hits) == (163, 81, 1)

    @given(partitions(6), st.sampled_from([3, 5, 7]), st.sampled_from([-1, 1]))
    def test_matches_pointwise_count(self, p, M, s1):
        # the sign at K/M^4 relative to 1 flips once per root above it
        scale = M**4
        roots = [cos_root(p.N, t) for t in p.root_ts]
        want = 0
        for K in range(-scale, scale + 1):
            a = mpmath.mpf(K) / scale
            if any(abs(a - r) < mpmath.mpf(10) ** -60 for r in roots):
                continue
            above = sum(1 for r in roots if r > a)
            if above % 2 == 1:
                want += 1
        assert rg.grid_success_count(p, M, s1).success_count == want

    def test_floor(self):
        assert rg.grid_floor(3, 3, 10**6) == (0, True)
        f, exact = rg.grid_floor(3, 1, 10**6)
        assert f == math.floor(10**6 * math.sqrt(3) / 2) and not exact


def test_csv():
    text = rg.partition_csv(rg.build_partition(3, [5, 1]))
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["index", "t_left", "t_right", "simple", "approx_length"]
    assert rows[1][:4] == ["0", "", "5", "false"]
    assert rows[2][:4] == ["1", "5", "1", "false"]
    assert float(rows[2][4]) == pytest.approx(math.sqrt(3), abs=1e-12)
    assert text == rg.partition_csv(rg.build_partition(3, [1, 5]))
