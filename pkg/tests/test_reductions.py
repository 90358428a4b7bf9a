import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from slpreduce import reductions as rd
from slpreduce.cheb import PrimeAssignment, cyclotomic_analog_dense, monic_cheb_dense, product
from slpreduce.densepoly import (
    DensePoly,
    count_distinct_real_roots,
    count_real_roots_with_multiplicity,
    derivative,
    divrem,
    gcd,
)
from slpreduce.errors import DegreeCapExceeded, InputError, NonCoprimeModuli
from slpreduce.numtheory import crt_recover, euler_totient, is_prime
from slpreduce.sat import Cnf, brute_force_count, clause_shapes, make_rng, random_cnf
from slpreduce.slp_core import eval_rational, slp_to_dense

F = Fraction
x = DensePoly.x()
P3 = PrimeAssignment((3,))
P35 = PrimeAssignment((3, 5))
P357 = PrimeAssignment((3, 5, 7))
UNSAT1 = Cnf(1, ((1,), (-1,)))


@st.composite
def small_cnfs(draw, n_max=3, m_max=6):
    n = draw(st.integers(1, n_max))
    return random_cnf(n, draw(st.integers(0, m_max)), make_rng(draw(st.integers(0, 2**32))))


def assignment_for(n):
    return PrimeAssignment.smallest(n)


class TestPolySat:
    def test_single_literals(self):
        assert rd.polysat_dense(Cnf(1, ((1,),)), P3) == x
        assert rd.polysat_dense(Cnf(1, ((-1,),)), P3) == DensePoly([F(-3, 4), 0, 1])
        assert rd.polysat_dense(UNSAT1, P3) == DensePoly([1])

    def test_disjunction(self):
        cnf = Cnf(2, ((1, 2),))
        want = product(cyclotomic_analog_dense(d) for d in (5, 3, 1))
        f = rd.polysat_dense(cnf, P35)
        assert f == want and f.degree == 7
        assert rd.z_combinatorial(cnf, P35) == 7 == sum(euler_totient(d) for d in (5, 3, 1))
        assert rd.polysat_via_assignments(UNSAT1, P3) == DensePoly([1])
        assert rd.z_combinatorial(UNSAT1, P3) == 0

    def test_unique_assignment_gives_single_factor(self):
        cnf = Cnf(3, ((1,), (-2,), (3,)))
        assert rd.polysat_dense(cnf, P357) == cyclotomic_analog_dense(5)

    def test_empty_formula(self):
        assert rd.polysat_dense(Cnf(2, ()), P35) == monic_cheb_dense(15)

    def test_degree_cap(self):
        with pytest.raises(DegreeCapExceeded):
            rd.polysat_dense(Cnf(3, ((1,),)), PrimeAssignment((29, 31, 37)))

    def test_prime_count_must_match(self):
        with pytest.raises(InputError):
            rd.polysat_dense(Cnf(2, ((1,),)), P3)

    @given(small_cnfs())
    def test_two_constructions_agree(self, cnf):
        pa = assignment_for(cnf.num_vars)
        f = rd.polysat_dense(cnf, pa)
        assert f == rd.polysat_via_assignments(cnf, pa)
        assert count_distinct_real_roots(f) == rd.z_combinatorial(cnf, pa)
        assert (f.degree > 0) == (brute_force_count(cnf) > 0)

    @given(small_cnfs(2, 4))
    def test_roots_are_the_encoded_cosines(self, cnf):
        pa = assignment_for(cnf.num_vars)
        f = rd.polysat_dense(cnf, pa)
        coeffs = [mpmath.mpf(F(c).numerator) / F(c).denominator for c in reversed(f.coeffs)]
        hits = set(rd.satisfying_root_indices(cnf, pa))
        for t in range(1, 2 * pa.M, 2):
            val = mpmath.polyval(coeffs, mpmath.cospi(mpmath.mpf(t) / (2 * pa.M)))
            assert (abs(val) < mpmath.mpf(10) ** -60) == (t in hits)


class TestClausePrograms:
    @pytest.mark.parametrize("clause", clause_shapes(2))
    def test_proportional_over_two_primes(self, clause):
        cp = rd.clause_slp(clause, P35)
        want = rd.polysat_dense(Cnf(2, (clause,)), P35)
        got = slp_to_dense(cp.slp, 64)
        assert got == want * cp.scalar

    def test_scalar_and_shape(self):
        cp = rd.clause_slp((1,), P357)
        assert cp.local_primes == (3,) and cp.N == 3
        assert cp.integer_multiple == DensePoly([0, 1])
        assert cp.scalar == 2 ** (35 - 1)
        assert len(cp.slp) < 105

    def test_bad_clause(self):
        with pytest.raises(InputError):
            rd.clause_slp((4,), P357)

    def test_sos_evaluates_as_sum(self):
        cnf = Cnf(2, ((1, 2), (-1,)))
        sos = rd.sos_slp(cnf, P35)
        a = F(2, 7)
        want = sum(eval_rational(cp.slp, a) ** 2 for cp in sos.clause_programs)
        assert eval_rational(sos.slp, a) == want


class TestSosAndRadical:
    @pytest.mark.parametrize("clauses,n", [
        (((1, 2),), 2), (((1,), (-1,)), 1), (((-1, 2), (1, -2)), 2), (((1,), (2,)), 2),
    ])
    def test_real_root_count_doubles(self, clauses, n):
        cnf = Cnf(n, clauses)
        pa = assignment_for(n)
        dense = slp_to_dense(rd.sos_slp(cnf, pa).slp, 4096)
        assert count_real_roots_with_multiplicity(dense) == 2 * rd.z_combinatorial(cnf, pa)

    def test_unsat_radical_has_no_real_roots(self):
        for cnf in (UNSAT1, Cnf(2, ((1,), (-1, 2), (-2,)))):
            rad = rd.radical_slp(rd.sos_slp(cnf, assignment_for(cnf.num_vars)))
            assert rad.real_part_degree == 0

    def test_single_literal_radical(self):
        rad = rd.radical_slp(rd.sos_slp(Cnf(1, ((1,),)), P3))
        q, r = divrem(rad.dense, x)
        assert r.is_zero and count_distinct_real_roots(q) == 0
        assert slp_to_dense(rad.slp, 64) == rad.dense

    @given(small_cnfs(2, 4))
    @settings(max_examples=25)
    def test_radical_structure(self, cnf):
        pa = assignment_for(cnf.num_vars)
        if not cnf.clauses:
            return
        rad = rd.radical_slp(rd.sos_slp(cnf, pa)).dense
        assert gcd(rad, derivative(rad)).degree == 0
        q, r = divrem(rad, rd.polysat_dense(cnf, pa))
        assert r.is_zero and count_distinct_real_roots(q) == 0

    def test_cap(self):
        with pytest.raises(DegreeCapExceeded):
            rd.radical_slp(rd.sos_slp(Cnf(3, ((1, 2),)), P357), degree_cap=50)


class TestDecision:
    def test_unsat(self):
        for seed in range(4):
            rep = rd.decide_sat_via_posslp(UNSAT1, seed, 10, "relaxed")
            assert rep.verdict == "LIKELY_UNSAT" and rep.successes == 0 and rep.trials == 10

    def test_all_true_shortcut(self):
        rep = rd.decide_sat_via_posslp(Cnf(2, ((1, -2),)), 0, 5)
        assert rep.verdict == "SAT" and rep.witness_kind == "all_true" and rep.trials == 0

    def test_satisfiable_is_found(self):
        cnf = Cnf(2, ((-1,), (-2,)))
        rep = rd.decide_sat_via_posslp(cnf, 1, 200, "relaxed")
        assert rep.verdict == "SAT" and rep.witness_kind in ("sign_flip", "exact_root_hit")

    def test_deterministic(self):
        cnf = Cnf(3, ((-1, 2), (-2, -3), (1, -3)))
        a = rd.decide_sat_via_posslp(cnf, 11, 20, "relaxed", early_stop=False)
        b = rd.decide_sat_via_posslp(cnf, 11, 20, "relaxed", early_stop=False)
        assert a.to_json(timing=False) == b.to_json(timing=False)
        assert a.per_trial == b.per_trial

    def test_policies(self):
        assert rd.primes_for_policy(3, "relaxed").primes == (3, 5, 7)
        assert rd.primes_for_policy(3, "strict_n3").primes == (29, 31, 37)
        with pytest.raises(InputError):
            rd.primes_for_policy(3, "loose")

    def test_strict_policy_hits_cap(self):
        with pytest.raises(DegreeCapExceeded):
            rd.decide_sat_via_posslp(Cnf(3, ((-1,),)), 0, 1, "strict_n3")


class TestCounting:
    def test_crt(self):
        assert crt_recover([2, 3], [3, 5]) == 8
        with pytest.raises(NonCoprimeModuli):
            crt_recover([1, 1], [3, 9])

    def test_setup_small(self):
        s = rd.primes_in_ap(1)
        assert s.moduli[0] == 3 and s.prime_matrix[0] == (5,)

    @given(st.integers(1, 10))
    def test_setup_invariants(self, n):
        s = rd.primes_in_ap(n)
        s.check()
        assert math.prod(s.moduli) > 2 ** (n + 1)
        for q, row in zip(s.moduli, s.prime_matrix):
            assert all(p % q == 2 and is_prime(p) for p in row)

    def test_examples(self):
        assert rd.sharp_sat_via_root_counting(Cnf(2, ((1, 2),))) == 3
        assert rd.sharp_sat_via_root_counting(Cnf(2, ((1, 2),)), "sturm") == 3
        assert rd.sharp_sat_via_root_counting(UNSAT1) == 0
        assert rd.sharp_sat_via_root_counting(Cnf(4, ())) == 16

    @given(small_cnfs(6, 8))
    def test_combinatorial_count(self, cnf):
        assert rd.sharp_sat_via_root_counting(cnf) == brute_force_count(cnf)

    def test_unknown_oracle(self):
        with pytest.raises(InputError):
            rd.sharp_sat_via_root_counting(Cnf(1, ((1,),)), "magic")


class TestSuccinct:
    def test_examples(self):
        assert rd.decide_succinct_inequality([2], [10], [3], [6])
        assert not rd.decide_succinct_inequality([3], [6], [2], [10])
        # equal products: sign 0 counts as >=
        assert rd.decide_succinct_inequality([2, 3], [1, 1], [6], [1])
        assert rd.decide_succinct_inequality([4], [3], [2], [6])

    @given(st.lists(st.tuples(st.integers(1, 30), st.integers(1, 60)), min_size=1, max_size=3),
           st.lists(st.tuples(st.integers(1, 30), st.integers(1, 60)), min_size=1, max_size=3))
    def test_against_integers(self, left, right):
        a, b = zip(*left)
        c, d = zip(*right)
        want = math.prod(u**v for u, v in left) >= math.prod(u**v for u, v in right)
        assert rd.decide_succinct_inequality(a, b, c, d) == want
