import math

import pytest
import sympy
from hypothesis import given, strategies as st

from slpreduce import numtheory as nt
from slpreduce.errors import InputError


@given(st.integers(-10, 10**12))
def test_primality_matches_sympy(n):
    assert nt.is_prime(n) == sympy.isprime(n)


def test_primality_edge_cases():
    # strong pseudoprimes to several small bases
    for n in (2047, 1373653, 25326001, 3215031751, 2152302898747, 3474749660383, 341550071728321):
        assert not nt.is_prime(n)
    assert nt.is_prime(2**61 - 1) and nt.is_prime(2**79 - 67)
    with pytest.raises(InputError):
        nt.is_prime(2**89 - 1)  # beyond the range the fixed bases certify


def test_odd_primes():
    gen = nt.odd_primes(27)
    assert [next(gen) for _ in range(3)] == [29, 31, 37]


@given(st.integers(1, 10**7))
def test_factor_totient_divisors(n):
    assert nt.factorize(n) == sympy.factorint(n)
    assert nt.euler_totient(n) == sympy.totient(n)
    assert nt.divisors(n) == sympy.divisors(n)
    assert nt.is_squarefree(n) == all(e == 1 for e in sympy.factorint(n).values())


@given(st.lists(st.sampled_from([3, 5, 7, 11, 13, 17, 19, 23]), min_size=1, max_size=5, unique=True),
       st.data())
def test_crt(moduli, data):
    M = math.prod(moduli)
    v = data.draw(st.integers(0, M - 1))
    assert nt.crt_recover([v % q for q in moduli], moduli) == v
