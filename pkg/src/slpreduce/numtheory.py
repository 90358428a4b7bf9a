"""Small exact number theory helpers: primality, totient, divisors, CRT."""

from __future__ import annotations

import math
from typing import Iterator, Sequence

from .errors import InputError, NonCoprimeModuli

# Deterministic Miller-Rabin witnesses, valid for n < 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_LIMIT = 3_317_044_064_679_887_385_961_981


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n >= _MR_LIMIT:
        raise InputError("primality test only certified below 3.3e24")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def odd_primes(start: int = 3) -> Iterator[int]:
    """Odd primes ``>= start`` in increasing order."""
    n = max(3, start)
    if n % 2 == 0:
        n += 1
    while True:
        if is_prime(n):
            yield n
        n += 2


def factorize(n: int) -> dict[int, int]:
    if n < 1:
        raise InputError("factorize needs n >= 1")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_totient(n: int) -> int:
    result = n
    for p in factorize(n):
        result = result // p * (p - 1)
    return result


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(n).values())


def crt_recover(residues: Sequence[int], moduli: Sequence[int]) -> int:
    """The unique ``x`` in ``[0, prod(moduli))`` with ``x = r_i mod q_i``."""
    if len(residues) != len(moduli):
        raise InputError("residues and moduli differ in length")
    x, m = 0, 1
    for r, q in zip(residues, moduli):
        if q < 1:
            raise InputError("moduli must be positive")
        if math.gcd(m, q) != 1:
            raise NonCoprimeModuli(f"modulus {q} shares a factor with earlier moduli")
        # solve x + m*k = r (mod q)
        k = (r - x) * pow(m, -1, q) % q if q > 1 else 0
        x += m * k
        m *= q
    return x % m
