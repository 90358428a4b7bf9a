"""3CNF formulas: DIMACS I/O, brute-force oracles and randomized isolation.

Literals use DIMACS conventions: variable ``v`` is the integer ``v`` and its
negation ``-v``.  An assignment over ``n`` variables is a bitmask whose bit
``v - 1`` holds the value of variable ``v``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ClauseTooLong, DimacsSyntaxError, InputError, TooManyVariables

DEFAULT_VAR_CAP = 24

Clause = tuple[int, ...]


@dataclass(frozen=True)
class Cnf:
    """A CNF with clauses of 1 to 3 literals.

    ``num_original`` marks variables ``num_original+1..num_vars`` as
    auxiliaries that are functionally determined by the others; ``None``
    means every variable is original.
    """

    num_vars: int
    clauses: tuple[Clause, ...]
    num_original: int | None = None

    def __post_init__(self):
        cl = tuple(tuple(int(l) for l in c) for c in self.clauses)
        object.__setattr__(self, "clauses", cl)
        if self.num_vars < 0:
            raise InputError("num_vars must be nonnegative")
        if self.num_original is not None and not 0 <= self.num_original <= self.num_vars:
            raise InputError("num_original outside 0..num_vars")
        for i, c in enumerate(cl):
            if not c:
                raise InputError(f"clause {i} is empty")
            if len(c) > 3:
                raise ClauseTooLong(i)
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise InputError(f"clause {i}: literal {lit} out of range")

    @property
    def n_original(self) -> int:
        return self.num_vars if self.num_original is None else self.num_original

    @property
    def m(self) -> int:
        return len(self.clauses)

    def is_satisfied_by(self, mask: int) -> bool:
        return all(any(_lit_true(l, mask) for l in c) for c in self.clauses)


@dataclass(frozen=True)
class BoolAssignment:
    bits: tuple[bool, ...]

    @classmethod
    def from_mask(cls, mask: int, n: int) -> BoolAssignment:
        return cls(tuple(bool(mask >> i & 1) for i in range(n)))

    @property
    def mask(self) -> int:
        return sum(1 << i for i, b in enumerate(self.bits) if b)

    def __len__(self) -> int:
        return len(self.bits)


def _lit_true(lit: int, mask: int) -> bool:
    v = mask >> (abs(lit) - 1) & 1
    return bool(v) if lit > 0 else not v


# --- DIMACS -----------------------------------------------------------------


def parse_dimacs(text: str) -> Cnf:
    header = None
    num_original = None
    clauses: list[Clause] = []
    cur: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) == 3 and parts[1] == "original" and parts[2].isdigit():
                num_original = int(parts[2])
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise DimacsSyntaxError(lineno, "duplicate problem line")
            if len(parts) != 4 or parts[1] != "cnf" or not parts[2].isdigit() or not parts[3].isdigit():
                raise DimacsSyntaxError(lineno, f"bad problem line {line!r}")
            header = (int(parts[2]), int(parts[3]))
            continue
        if header is None:
            raise DimacsSyntaxError(lineno, "clause before problem line")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsSyntaxError(lineno, f"bad literal {tok!r}") from None
            if lit == 0:
                if not cur:
                    raise DimacsSyntaxError(lineno, "empty clause")
                if len(cur) > 3:
                    raise ClauseTooLong(len(clauses))
                clauses.append(tuple(cur))
                cur = []
            else:
                if abs(lit) > header[0]:
                    raise DimacsSyntaxError(lineno, f"literal {lit} exceeds {header[0]} variables")
                cur.append(lit)
    if header is None:
        raise DimacsSyntaxError(0, "missing problem line")
    if cur:
        raise DimacsSyntaxError(0, "last clause not terminated by 0")
    if len(clauses) != header[1]:
        raise DimacsSyntaxError(0, f"header declares {header[1]} clauses, found {len(clauses)}")
    if num_original is not None and num_original > header[0]:
        raise DimacsSyntaxError(0, "original variable count exceeds total")
    return Cnf(header[0], tuple(clauses), num_original)


def serialize_dimacs(cnf: Cnf) -> str:
    lines = []
    if cnf.num_original is not None:
        lines.append(f"c original {cnf.num_original}")
    lines.append(f"p cnf {cnf.num_vars} {len(cnf.clauses)}")
    lines.extend(" ".join(map(str, c)) + " 0" for c in cnf.clauses)
    return "\n".join(lines) + "\n"


# --- brute force ------------------------------------------------------------


def _check_cap(cnf: Cnf, cap: int) -> None:
    if cnf.num_vars > cap:
        raise TooManyVariables(f"{cnf.num_vars} variables exceed the brute-force cap {cap}")


def satisfying_masks(cnf: Cnf, cap: int = DEFAULT_VAR_CAP) -> np.ndarray:
    """All satisfying assignments as sorted bitmasks."""
    _check_cap(cnf, cap)
    masks = np.arange(1 << cnf.num_vars, dtype=np.uint32)
    ok = np.ones(masks.shape, dtype=bool)
    for c in cnf.clauses:
        sat = np.zeros(masks.shape, dtype=bool)
        for lit in c:
            bit = (masks >> np.uint32(abs(lit) - 1)) & np.uint32(1)
            sat |= bit.astype(bool) if lit > 0 else ~bit.astype(bool)
        ok &= sat
    return masks[ok]


def _literal_values(c: Clause, vals: np.ndarray) -> np.ndarray:
    raw = vals[:, [abs(l) for l in c]]
    pos = np.array([l > 0 for l in c])
    return np.where(raw < 0, -1, np.where(pos, raw, 1 - raw))


def _propagate(cnf: Cnf, vals: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unit propagation on every row of ``vals`` (-1 = unassigned), in place.

    Returns ``(dead, done)``: rows with a falsified clause, and rows where
    every clause already has a true literal.
    """
    rows_n = vals.shape[0]
    dead = np.zeros(rows_n, dtype=bool)
    changed = True
    while changed:
        changed = False
        done = np.ones(rows_n, dtype=bool)
        for c in cnf.clauses:
            lv = _literal_values(c, vals)
            unknown = lv < 0
            n_unknown = unknown.sum(axis=1)
            satisfied = (lv == 1).any(axis=1)
            done &= satisfied
            dead |= ~satisfied & (n_unknown == 0)
            unit = ~satisfied & (n_unknown == 1) & ~dead
            if unit.any():
                rows = np.nonzero(unit)[0]
                which = unknown[rows].argmax(axis=1)
                for pos, lit in enumerate(c):
                    sel = rows[which == pos]
                    if sel.size:
                        vals[sel, abs(lit)] = 1 if lit > 0 else 0
                changed = True
    return dead, done


def _extendable(cnf: Cnf, vals: np.ndarray) -> np.ndarray:
    """For each row of partial assignments, whether some completion of the
    unassigned variables satisfies ``cnf``."""
    vals = vals.copy()
    dead, done = _propagate(cnf, vals)
    ok = ~dead
    open_rows = ok & ~done
    if open_rows.any():
        idx = np.nonzero(open_rows)[0]
        sub = vals[idx]
        # an open row always has an unassigned variable in an open clause
        col = int(np.argmax((sub[:, 1:] < 0).any(axis=0))) + 1
        res = np.zeros(idx.size, dtype=bool)
        for v in (0, 1):
            branch = sub.copy()
            branch[:, col] = np.where(branch[:, col] < 0, v, branch[:, col])
            res |= _extendable(cnf, branch)
        ok[idx] = res
    return ok


def projected_solution_masks(cnf: Cnf, cap: int = DEFAULT_VAR_CAP) -> np.ndarray:
    """Original-variable assignments that extend to a full solution."""
    n = cnf.n_original
    if n > cap:
        raise TooManyVariables(f"{n} original variables exceed the brute-force cap {cap}")
    masks = np.arange(1 << n, dtype=np.int64)
    vals = np.full((masks.size, cnf.num_vars + 1), -1, dtype=np.int8)
    for v in range(1, n + 1):
        vals[:, v] = (masks >> (v - 1)) & 1
    return masks[_extendable(cnf, vals)]


def brute_force_count(cnf: Cnf, cap: int = DEFAULT_VAR_CAP, project: bool = True) -> int:
    """Number of satisfying assignments, projected onto original variables
    when auxiliary metadata is present and ``project`` is set."""
    if project and cnf.num_original is not None and cnf.num_original < cnf.num_vars:
        return int(projected_solution_masks(cnf, cap).size)
    return int(satisfying_masks(cnf, cap).size)


def brute_force_sat(cnf: Cnf, cap: int = DEFAULT_VAR_CAP) -> BoolAssignment | None:
    sols = satisfying_masks(cnf, cap)
    if sols.size == 0:
        return None
    return BoolAssignment.from_mask(int(sols[0]), cnf.num_vars)


def all_true_check(cnf: Cnf) -> bool:
    return all(any(l > 0 for l in c) for c in cnf.clauses)


def unique_sat_check(cnf: Cnf, cap: int = DEFAULT_VAR_CAP) -> bool:
    return brute_force_count(cnf, cap) == 1


# --- randomness -------------------------------------------------------------


def make_rng(seed: int, *labels: int) -> np.random.Generator:
    """Philox stream keyed by a 64-bit ``seed``; ``labels`` split it into
    independent reproducible substreams."""
    if not 0 <= seed < 1 << 64:
        raise InputError("seed must fit in 64 bits")
    ss = np.random.SeedSequence(seed, spawn_key=tuple(labels))
    return np.random.Generator(np.random.Philox(ss))


def random_cnf(
    n: int, m: int, rng: np.random.Generator, max_width: int = 3, min_width: int = 1
) -> Cnf:
    """``m`` clauses over distinct variables with widths in ``min_width..max_width``."""
    clauses = []
    hi = min(max_width, n)
    for _ in range(m):
        w = int(rng.integers(min(min_width, hi), hi + 1))
        vs = rng.choice(n, size=w, replace=False) + 1
        signs = rng.integers(0, 2, size=w)
        clauses.append(tuple(int(v) if s else -int(v) for v, s in zip(vs, signs)))
    return Cnf(n, tuple(clauses))


def clause_shapes(n: int, max_width: int = 3) -> list[Clause]:
    """Every clause over distinct variables of ``1..n`` up to sign and order."""
    out = []
    for w in range(1, min(max_width, n) + 1):
        for vs in itertools.combinations(range(1, n + 1), w):
            for signs in itertools.product((1, -1), repeat=w):
                out.append(tuple(s * v for s, v in zip(signs, vs)))
    return out


def all_cnfs(n: int) -> Iterable[Cnf]:
    """Every set of distinct clauses over ``n`` variables (exponential)."""
    shapes = clause_shapes(n)
    for bits in range(1 << len(shapes)):
        yield Cnf(n, tuple(c for i, c in enumerate(shapes) if bits >> i & 1))


# --- isolation --------------------------------------------------------------


@dataclass(frozen=True)
class XorConstraint:
    """``XOR of variables == parity``."""

    variables: tuple[int, ...]
    parity: int


@dataclass(frozen=True)
class IsolationResult:
    cnf: Cnf
    k: int
    constraints: tuple[XorConstraint, ...] = field(default_factory=tuple)


def _xor_clauses(vs: Sequence[int], parity: int) -> list[Clause]:
    """Forbid every assignment of ``vs`` (at most 3) with the wrong parity."""
    out = []
    for vals in itertools.product((0, 1), repeat=len(vs)):
        if sum(vals) % 2 != parity:
            out.append(tuple(-v if b else v for v, b in zip(vs, vals)))
    return out


def encode_xor(vs: Sequence[int], parity: int, next_var: int) -> tuple[list[Clause], int]:
    """3CNF for ``XOR(vs) = parity``; returns clauses and the next free
    variable.  Long chains get fresh variables ``y = a XOR b``."""
    vs = list(vs)
    clauses: list[Clause] = []
    if not vs:
        if parity:
            # 0 = 1: plainly unsatisfiable without new variables
            clauses += [(1,), (-1,)] if next_var > 1 else []
        return clauses, next_var
    while len(vs) > 3:
        a, b = vs[0], vs[1]
        y = next_var
        next_var += 1
        # y <-> a XOR b, i.e. XOR(a, b, y) = 0
        clauses += _xor_clauses((a, b, y), 0)
        vs = [y] + vs[2:]
    clauses += _xor_clauses(vs, parity)
    return clauses, next_var


def vv_reduce_detail(cnf: Cnf, rng: np.random.Generator) -> IsolationResult:
    n = cnf.n_original
    if n < 1:
        raise InputError("isolation needs at least one variable")
    k = int(rng.integers(0, n + 1))
    clauses = list(cnf.clauses)
    next_var = cnf.num_vars + 1
    constraints = []
    for _ in range(k):
        row = rng.integers(0, 2, size=n)
        parity = int(rng.integers(0, 2))
        vs = tuple(i + 1 for i in range(n) if row[i])
        constraints.append(XorConstraint(vs, parity))
        extra, next_var = encode_xor(vs, parity, next_var)
        clauses += extra
    out = Cnf(next_var - 1, tuple(clauses), n if next_var - 1 > n or cnf.num_original is not None else None)
    return IsolationResult(out, k, tuple(constraints))


def vv_reduce(cnf: Cnf, rng: np.random.Generator) -> Cnf:
    """Add ``k`` random affine GF(2) constraints, ``k`` uniform in ``0..n``."""
    return vv_reduce_detail(cnf, rng).cnf
