"""From 3CNF formulas to polynomials, programs, signs and root counts.

A formula ``W`` over variables ``1..n`` with primes ``p_1..p_n`` becomes the
monic polynomial whose roots are ``r_M(t)`` for the odd ``t`` that encode a
satisfying assignment (variable ``i`` true iff ``p_i | t``).  Programs for
single clauses are squared and summed; the squarefree part of that sum has
exactly these real roots, each simple, which is what the sign sampler and
the root counter rely on.
"""

from __future__ import annotations

import json
import math
import threading
import time
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Sequence

from . import slp_core as sc
from .cheb import (
    PrimeAssignment,
    cheb_slp_factored,
    cyclotomic_analog_dense,
    monic_cheb_dense,
)
from .densepoly import (
    DensePoly,
    content,
    count_distinct_real_roots,
    count_real_roots_with_multiplicity,
    divrem,
    gcd,
    horner_slp,
    lcm,
    primitive_part,
    squarefree_part,
)
from .errors import (
    DegreeCapExceeded,
    DegreeExceeded,
    ExactDivisionFailed,
    InputError,
    InvariantViolation,
    OddRootCount,
)
from .numtheory import crt_recover, euler_totient, is_prime, odd_primes
from .root_geometry import IntervalPartition, build_partition
from .sat import Clause, Cnf, DEFAULT_VAR_CAP, all_true_check, make_rng, satisfying_masks, vv_reduce

__all__ = [
    "ClausePolynomial",
    "CountingSetup",
    "DecisionReport",
    "RadicalResult",
    "SosProgram",
    "build_succinct_inequality_slp",
    "clause_slp",
    "crt_recover",
    "decide_sat_via_posslp",
    "decide_succinct_inequality",
    "euler_totient",
    "polysat_dense",
    "polysat_via_assignments",
    "primes_for_policy",
    "primes_in_ap",
    "radical_slp",
    "root_partition",
    "sharp_sat_via_root_counting",
    "sos_slp",
    "z_combinatorial",
]

DEFAULT_DEGREE_CAP = 4096


def _check_vars(cnf: Cnf, pa: PrimeAssignment) -> None:
    if cnf.num_vars != pa.n:
        raise InputError(f"formula has {cnf.num_vars} variables but {pa.n} primes were given")


# --- dense construction ------------------------------------------------------


@lru_cache(maxsize=4096)
def _literal_poly(lit: int, pa: PrimeAssignment) -> DensePoly:
    M = pa.M
    pos = monic_cheb_dense(M // pa.prime(abs(lit)))
    if lit > 0:
        return pos
    q, r = divrem(monic_cheb_dense(M), pos)
    if not r.is_zero:
        raise ExactDivisionFailed(f"T~_{M} not divisible by T~_{M // pa.prime(abs(lit))}")
    return q


@lru_cache(maxsize=4096)
def _clause_poly(clause: Clause, pa: PrimeAssignment) -> DensePoly:
    out = _literal_poly(clause[0], pa)
    for lit in clause[1:]:
        out = lcm(out, _literal_poly(lit, pa))
    return out


def polysat_dense(cnf: Cnf, pa: PrimeAssignment, degree_cap: int = DEFAULT_DEGREE_CAP) -> DensePoly:
    """Monic polynomial with roots ``r_M(t)`` for satisfying-assignment
    indices ``t``, built by lcm over literals and gcd over clauses."""
    _check_vars(cnf, pa)
    if pa.M > degree_cap:
        raise DegreeCapExceeded(f"M={pa.M} exceeds degree cap {degree_cap}")
    if not cnf.clauses:
        return monic_cheb_dense(pa.M)
    out = None
    for c in cnf.clauses:
        cp = _clause_poly(c, pa)
        out = cp if out is None else gcd(out, cp)
        if out.degree == 0:
            break
    return out


def polysat_via_assignments(cnf: Cnf, pa: PrimeAssignment, cap: int = DEFAULT_VAR_CAP) -> DensePoly:
    """Product of ``C_{M/alpha(psi)}`` over the satisfying assignments."""
    _check_vars(cnf, pa)
    M = pa.M
    out = DensePoly([1])
    for mask in satisfying_masks(cnf, cap):
        out = out * cyclotomic_analog_dense(M // _alpha_mask(int(mask), pa))
    return out


def _alpha_mask(mask: int, pa: PrimeAssignment) -> int:
    a = 1
    for i, p in enumerate(pa.primes):
        if mask >> i & 1:
            a *= p
    return a


def z_combinatorial(cnf: Cnf, pa: PrimeAssignment, cap: int = DEFAULT_VAR_CAP) -> int:
    """Number of distinct real roots of the formula polynomial, by totients."""
    _check_vars(cnf, pa)
    M = pa.M
    return sum(euler_totient(M // _alpha_mask(int(m), pa)) for m in satisfying_masks(cnf, cap))


def satisfying_root_indices(cnf: Cnf, pa: PrimeAssignment, cap: int = DEFAULT_VAR_CAP) -> list[int]:
    """All ``t`` (indexing roots of ``T_M``) that encode satisfying assignments."""
    _check_vars(cnf, pa)
    M = pa.M
    out = []
    for m in satisfying_masks(cnf, cap):
        a = _alpha_mask(int(m), pa)
        out.extend(t for t in range(a, 2 * M, 2 * a) if math.gcd(t, M) == a)
    return sorted(out)


def root_partition(cnf: Cnf, pa: PrimeAssignment, cap: int = DEFAULT_VAR_CAP) -> IntervalPartition:
    """Partition of (-1, 1) by the formula's roots.

    With a unique satisfying assignment the roots are those of ``C_N``,
    ``N = M/alpha``, and are indexed against ``T_N``; otherwise against ``T_M``.
    """
    _check_vars(cnf, pa)
    masks = satisfying_masks(cnf, cap)
    M = pa.M
    if masks.size == 1:
        a = _alpha_mask(int(masks[0]), pa)
        N = M // a
        return build_partition(N, [t for t in range(1, 2 * N, 2) if math.gcd(t, N) == 1])
    return build_partition(M, satisfying_root_indices(cnf, pa, cap))


# --- programs ---------------------------------------------------------------


@dataclass(frozen=True)
class ClausePolynomial:
    clause: Clause
    local_primes: tuple[int, ...]
    N: int
    polysat_local: DensePoly
    integer_multiple: DensePoly
    slp: sc.Slp
    scalar: int

    @property
    def outer_degree(self) -> int:
        return self.polysat_local.degree


def clause_slp(clause: Clause, pa: PrimeAssignment) -> ClausePolynomial:
    """Program for an integer multiple of the clause polynomial over all of
    ``M``: the clause is built densely over its own primes only (product
    ``N``), then composed with ``T_{M/N}``."""
    return _clause_slp(tuple(clause), pa)


@lru_cache(maxsize=4096)
def _clause_slp(clause: Clause, pa: PrimeAssignment) -> ClausePolynomial:
    vs = sorted({abs(l) for l in clause})
    if not vs or len(vs) > 3:
        raise InputError("clause needs 1 to 3 distinct variables")
    if vs[-1] > pa.n:
        raise InputError(f"clause mentions variable {vs[-1]} beyond {pa.n}")
    local = PrimeAssignment(tuple(pa.prime(v) for v in vs))
    renum = {v: i + 1 for i, v in enumerate(vs)}
    local_clause = tuple(renum[abs(l)] * (1 if l > 0 else -1) for l in clause)
    poly = _clause_poly(local_clause, local)
    ints = primitive_part(poly)
    c = 1 / content(poly)  # ints = c * poly; c is a positive integer
    inner = horner_slp(ints)
    rest = [p for i, p in enumerate(pa.primes, 1) if i not in renum]
    q = pa.M // local.M
    prog = sc.compose(inner, cheb_slp_factored(rest)) if rest else inner
    # lc(T_q) = 2**(q-1) and the clause polynomial over M is monic
    scalar = int(c) * 2 ** ((q - 1) * poly.degree)
    return ClausePolynomial(tuple(clause), local.primes, local.M, poly, ints, prog, scalar)


@dataclass(frozen=True)
class SosProgram:
    slp: sc.Slp
    clause_programs: tuple[ClausePolynomial, ...]


def sos_slp(cnf: Cnf, pa: PrimeAssignment) -> SosProgram:
    """Sum of the squared clause programs."""
    _check_vars(cnf, pa)
    clauses = tuple(clause_slp(c, pa) for c in cnf.clauses)
    b = sc.SlpBuilder()
    acc = None
    for cp in clauses:
        node = b.embed(cp.slp)
        sq = b.mul(node, node)
        acc = sq if acc is None else b.add(acc, sq)
    if acc is None:
        acc = b.zero()
    return SosProgram(b.build(acc), clauses)


@dataclass(frozen=True)
class RadicalResult:
    slp: sc.Slp
    dense: DensePoly

    @cached_property
    def real_part_degree(self) -> int:
        """Number of real roots (all simple)."""
        return count_distinct_real_roots(self.dense)


def radical_slp(sos: SosProgram, degree_cap: int = DEFAULT_DEGREE_CAP) -> RadicalResult:
    """Expand, drop repeated factors, and re-emit as a program.

    This exact squarefree step stands in for a general randomized
    construction of a program for the radical; it only works while the
    expansion fits under ``degree_cap``.
    """
    bound = sc.degree_bound(sos.slp)
    if bound > degree_cap:
        raise DegreeCapExceeded(f"degree bound {bound} exceeds cap {degree_cap}")
    try:
        dense = sc.slp_to_dense(sos.slp, degree_cap)
    except DegreeExceeded as exc:
        raise DegreeCapExceeded(str(exc)) from exc
    if dense.is_zero:
        raise InputError("the sum of squares is identically zero")
    rad = squarefree_part(dense)
    return RadicalResult(horner_slp(rad), rad)


# --- prime policies ---------------------------------------------------------


POLICIES = ("strict_n3", "relaxed")


def primes_for_policy(n: int, policy: str) -> PrimeAssignment:
    """``strict_n3``: smallest odd primes ``>= max(3, n**3)``;
    ``relaxed``: 3, 5, 7, ..."""
    if policy == "strict_n3":
        return PrimeAssignment.smallest(n, max(3, n**3))
    if policy == "relaxed":
        return PrimeAssignment.smallest(n, 3)
    raise InputError(f"unknown prime policy {policy!r}")


# --- the randomized decision ------------------------------------------------


@dataclass
class DecisionReport:
    verdict: str
    trials: int
    successes: int
    witness_kind: str | None
    seed: int
    primes: tuple[int, ...]
    M: int
    policy: str
    elapsed_ms: int | None = None
    per_trial: list[str] = field(default_factory=list, repr=False)

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials if self.trials else 0.0

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "verdict": self.verdict,
            "trials": str(self.trials),
            "successes": str(self.successes),
            "witness_kind": self.witness_kind,
            "seed": str(self.seed),
            "primes": [str(p) for p in self.primes],
            "M": str(self.M),
            "policy": self.policy,
            "elapsed_ms": str(self.elapsed_ms) if timing and self.elapsed_ms is not None else None,
        }

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing))


class _RadicalCache:
    """Radicals keyed by (formula, primes); isolation often repeats a formula."""

    def __init__(self, degree_cap: int):
        self.degree_cap = degree_cap
        self._store: dict = {}
        self._lock = threading.Lock()

    def get(self, cnf: Cnf, pa: PrimeAssignment) -> RadicalResult:
        key = (cnf.num_vars, cnf.clauses, pa.primes)
        with self._lock:
            hit = self._store.get(key)
        if hit is None:
            hit = radical_slp(sos_slp(Cnf(cnf.num_vars, cnf.clauses), pa), self.degree_cap)
            with self._lock:
                self._store[key] = hit
        return hit


def decide_sat_via_posslp(
    cnf: Cnf,
    seed: int,
    trials: int,
    policy: str = "strict_n3",
    degree_cap: int = DEFAULT_DEGREE_CAP,
    precision_cap: int = sc.DEFAULT_PRECISION_CAP,
    early_stop: bool = True,
    cache: _RadicalCache | None = None,
) -> DecisionReport:
    """Randomized satisfiability test through signs of one program.

    Each trial isolates with fresh randomness, builds the radical of the
    sum-of-squares program, samples ``K`` in ``[-M^4, M^4]`` and compares
    the sign at ``K/M^4`` with the sign at 1.  A differing sign or a zero
    certifies a real root and hence satisfiability.
    """
    if trials < 1:
        raise InputError("trials must be at least 1")
    if policy not in POLICIES:
        raise InputError(f"unknown prime policy {policy!r}")
    start = time.perf_counter()
    report = DecisionReport("LIKELY_UNSAT", 0, 0, None, seed, (), 0, policy)
    if all_true_check(cnf):
        report.verdict = "SAT"
        report.witness_kind = "all_true"
        report.elapsed_ms = int((time.perf_counter() - start) * 1000)
        return report
    cache = cache or _RadicalCache(degree_cap)
    for i in range(trials):
        rng = make_rng(seed, i)
        reduced = vv_reduce(cnf, rng)
        pa = primes_for_policy(reduced.num_vars, policy)
        rad = cache.get(reduced, pa)
        M = pa.M
        scale = M**4
        K = int(rng.integers(-scale, scale, endpoint=True))
        s_1 = sc.sign_at_rational(rad.slp, 1, 1, precision_cap=precision_cap)
        if s_1 == 0:
            raise InvariantViolation("the radical vanishes at 1")
        s_a = sc.sign_at_rational(rad.slp, K, scale, precision_cap=precision_cap)
        report.trials += 1
        report.primes = pa.primes
        report.M = M
        kind = None
        if s_a == 0:
            kind = "exact_root_hit"
        elif s_a * s_1 < 0:
            kind = "sign_flip"
        report.per_trial.append(kind or "none")
        if kind:
            report.successes += 1
            if report.witness_kind is None:
                report.witness_kind = kind
                report.verdict = "SAT"
            if early_stop:
                break
    report.elapsed_ms = int((time.perf_counter() - start) * 1000)
    return report


# --- counting ---------------------------------------------------------------


@dataclass(frozen=True)
class CountingSetup:
    """Moduli ``q_i`` and, per modulus, ``n`` primes ``p_ij = 2 mod q_i``.

    There are ``n`` moduli unless more are needed to push their product
    above ``2**(n+1)`` (only ``n = 1``).
    """

    n: int
    moduli: tuple[int, ...]
    prime_matrix: tuple[tuple[int, ...], ...]

    def check(self) -> None:
        if math.prod(self.moduli) <= 2 ** (self.n + 1):
            raise InvariantViolation("product of moduli too small")
        seen = set()
        for q, row in zip(self.moduli, self.prime_matrix):
            if len(row) != self.n:
                raise InvariantViolation("row length differs from n")
            for p in row:
                if p % q != 2 % q or p % 2 == 0 or not is_prime(p) or p in seen:
                    raise InvariantViolation(f"bad entry {p} for modulus {q}")
                seen.add(p)


def primes_in_ap(n: int) -> CountingSetup:
    """Deterministic setup: ``q_i`` the ``i``-th odd prime, and ``p_ij``
    the first unused primes of the form ``a*q_i + 2``."""
    if n < 1:
        raise InputError("n must be at least 1")
    moduli = []
    gen = odd_primes(3)
    while len(moduli) < n or math.prod(moduli) <= 2 ** (n + 1):
        moduli.append(next(gen))
    used: set[int] = set()
    rows = []
    for q in moduli:
        row = []
        a = 1
        while len(row) < n:
            cand = a * q + 2
            if cand % 2 == 1 and cand not in used and is_prime(cand):
                row.append(cand)
                used.add(cand)
            a += 1
        rows.append(tuple(row))
    setup = CountingSetup(n, tuple(moduli), tuple(rows))
    setup.check()
    return setup


def real_root_count(cnf: Cnf, pa: PrimeAssignment, oracle_kind: str = "combinatorial",
                    degree_cap: int = DEFAULT_DEGREE_CAP) -> int:
    """Real roots of the sum-of-squares polynomial, with multiplicity."""
    if oracle_kind == "combinatorial":
        return 2 * z_combinatorial(cnf, pa)
    if oracle_kind == "sturm":
        sos = sos_slp(cnf, pa)
        if not cnf.clauses:
            raise InputError("the empty formula gives the zero polynomial")
        try:
            dense = sc.slp_to_dense(sos.slp, degree_cap)
        except DegreeExceeded as exc:
            raise DegreeCapExceeded(str(exc)) from exc
        return count_real_roots_with_multiplicity(dense)
    raise InputError(f"unknown oracle {oracle_kind!r}")


@dataclass(frozen=True)
class CountResult:
    count: int
    moduli: tuple[int, ...]
    residues: tuple[int, ...]
    root_counts: tuple[int, ...]

    def to_json(self) -> str:
        return json.dumps({
            "count": str(self.count),
            "moduli": [str(q) for q in self.moduli],
            "residues": [str(r) for r in self.residues],
            "root_counts": [str(z) for z in self.root_counts],
        })


def sharp_sat_detail(cnf: Cnf, oracle_kind: str = "combinatorial",
                     degree_cap: int = DEFAULT_DEGREE_CAP) -> CountResult:
    n = cnf.num_vars
    if not cnf.clauses:
        return CountResult(2**n, (), (), ())
    setup = primes_in_ap(n)
    residues, zs = [], []
    for q, row in zip(setup.moduli, setup.prime_matrix):
        z = real_root_count(cnf, PrimeAssignment(row), oracle_kind, degree_cap)
        if z % 2:
            raise OddRootCount(f"odd root count {z} for modulus {q}")
        zs.append(z)
        residues.append((z // 2) % q)
    count = crt_recover(residues, setup.moduli)
    return CountResult(count, setup.moduli, tuple(residues), tuple(zs))


def sharp_sat_via_root_counting(cnf: Cnf, oracle_kind: str = "combinatorial",
                                degree_cap: int = DEFAULT_DEGREE_CAP) -> int:
    """Number of satisfying assignments recovered from root counts mod q_i."""
    return sharp_sat_detail(cnf, oracle_kind, degree_cap).count


# --- succinct power comparisons ---------------------------------------------


def _power_product(bases: Sequence[int], exps: Sequence[int]) -> sc.Slp:
    if len(bases) != len(exps) or not bases:
        raise InputError("need equally long nonempty base and exponent lists")
    out = None
    for a, e in zip(bases, exps):
        if a < 1 or e < 1:
            raise InputError("entries must be positive")
        term = sc.power(sc.slp_from_integer(a), e)
        out = term if out is None else sc.mul(out, term)
    return out


def build_succinct_inequality_slp(a: Sequence[int], b: Sequence[int],
                                  c: Sequence[int], d: Sequence[int]) -> sc.Slp:
    """Constant program for ``prod a_i**b_i - prod c_j**d_j``."""
    return sc.sub(_power_product(a, b), _power_product(c, d))


def decide_succinct_inequality(a, b, c, d, precision_cap: int = sc.DEFAULT_PRECISION_CAP) -> bool:
    """Whether ``prod a_i**b_i >= prod c_j**d_j``."""
    prog = build_succinct_inequality_slp(a, b, c, d)
    return sc.sign_at_rational(prog, 0, 1, precision_cap=precision_cap) >= 0
