"""Constant-free straight-line programs over Z[x].

A program is the sequence ``a_0 = 1, a_1 = x, a_i = a_j op a_k`` with
``op`` in ``{+, -, *}`` and ``j, k < i``.  Only the derived nodes are stored;
index 0 and 1 are implicit.  The length of a program is its number of
derived nodes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import interval as iv
from .errors import (
    BadNode,
    BadOutIndex,
    DegreeExceeded,
    ForwardReference,
    SlpError,
    SlpSyntaxError,
    ZeroDenominator,
    ZeroModulus,
)

KINDS = ("add", "sub", "mul")
_OPCODE = {"add": 0, "sub": 1, "mul": 2}

DEFAULT_START_BITS = 64
DEFAULT_PRECISION_CAP = 1 << 16
# Below this estimated size the exact integer evaluation is cheaper than
# another round of interval refinement.
EXACT_SHORTCUT_BITS = 1 << 14


@dataclass(frozen=True)
class SlpNode:
    kind: str  # "one", "x", "add", "sub" or "mul"
    j: int = -1
    k: int = -1

    def __repr__(self) -> str:
        if self.kind in ("one", "x"):
            return self.kind.capitalize()
        return f"{self.kind.capitalize()}({self.j},{self.k})"


ONE_NODE = SlpNode("one")
X_NODE = SlpNode("x")


def Add(j: int, k: int) -> SlpNode:
    return SlpNode("add", j, k)


def Sub(j: int, k: int) -> SlpNode:
    return SlpNode("sub", j, k)


def Mul(j: int, k: int) -> SlpNode:
    return SlpNode("mul", j, k)


@dataclass(frozen=True)
class Slp:
    """``ops[i]`` defines node ``i + 2``; ``out`` names the result node."""

    ops: tuple[tuple[str, int, int], ...]
    out: int

    @classmethod
    def from_nodes(cls, nodes: Sequence[SlpNode], out: int) -> Slp:
        if len(nodes) < 2 or nodes[0].kind != "one" or nodes[1].kind != "x":
            raise BadNode(0, "a program starts with the One and X nodes")
        ops = []
        for i, node in enumerate(nodes[2:], start=2):
            if node.kind not in KINDS:
                raise BadNode(i, f"unexpected {node.kind!r} node")
            ops.append((node.kind, node.j, node.k))
        return cls(tuple(ops), out)

    @property
    def nodes(self) -> list[SlpNode]:
        return [ONE_NODE, X_NODE] + [SlpNode(*op) for op in self.ops]

    @property
    def length(self) -> int:
        return len(self.ops)

    @property
    def size(self) -> int:
        return len(self.ops) + 2

    def __len__(self) -> int:
        return len(self.ops)

    @cached_property
    def _code(self) -> tuple[tuple[int, int, int, int], ...]:
        """Live instructions as ``(dest, opcode, j, k)``, in order."""
        require_valid(self)
        live = bytearray(self.size)
        live[self.out] = 1
        for i in range(self.size - 1, 1, -1):
            if live[i]:
                _, j, k = self.ops[i - 2]
                live[j] = 1
                live[k] = 1
        return tuple(
            (i + 2, _OPCODE[kind], j, k)
            for i, (kind, j, k) in enumerate(self.ops)
            if live[i + 2]
        )

    @cached_property
    def _degrees(self) -> list[int]:
        deg = [0] * self.size
        deg[1] = 1
        for dest, opc, j, k in self._code:
            deg[dest] = deg[j] + deg[k] if opc == 2 else max(deg[j], deg[k])
        return deg

    @cached_property
    def _norm_bits(self) -> list[float]:
        # log2 of an upper bound on the l1-norm of each node's polynomial
        nb = [0.0] * self.size
        for dest, opc, j, k in self._code:
            a, b = nb[j], nb[k]
            nb[dest] = a + b if opc == 2 else max(a, b) + 1.0
        return nb


# --- validation -------------------------------------------------------------


def validate(slp: Slp) -> list[SlpError]:
    """Return the list of invariant violations; empty means valid."""
    errors: list[SlpError] = []
    for i, op in enumerate(slp.ops, start=2):
        if len(op) != 3 or op[0] not in KINDS:
            errors.append(BadNode(i, f"malformed instruction {op!r}"))
            continue
        _, j, k = op
        if not (isinstance(j, int) and isinstance(k, int)) or j < 0 or k < 0:
            errors.append(BadNode(i, "operand indices must be natural numbers"))
        elif j >= i or k >= i:
            errors.append(ForwardReference(i))
    if not isinstance(slp.out, int) or not 0 <= slp.out < slp.size:
        errors.append(BadOutIndex(slp.out, slp.size))
    return errors


def require_valid(slp: Slp) -> None:
    errors = validate(slp)
    if errors:
        raise errors[0]


# --- evaluation -------------------------------------------------------------


def _as_fraction(a) -> Fraction:
    return a if isinstance(a, Fraction) else Fraction(a)


def _eval_homogeneous(slp: Slp, p: int, q: int) -> tuple[int, int]:
    """Exact value as ``(N, d)`` with ``f(p/q) = N / q**d`` and ``q > 0``."""
    code = slp._code
    deg = slp._degrees
    num = [0] * slp.size
    num[0] = 1
    num[1] = p
    if q == 1:
        for dest, opc, j, k in code:
            if opc == 0:
                num[dest] = num[j] + num[k]
            elif opc == 1:
                num[dest] = num[j] - num[k]
            else:
                num[dest] = num[j] * num[k]
        return num[slp.out], 0
    qpow: dict[int, int] = {0: 1, 1: q}

    def qp(e: int) -> int:
        v = qpow.get(e)
        if v is None:
            v = qpow[e] = q**e
        return v

    for dest, opc, j, k in code:
        if opc == 2:
            num[dest] = num[j] * num[k]
            continue
        dj, dk = deg[j], deg[k]
        a, b = num[j], num[k]
        if dj < dk:
            a *= qp(dk - dj)
        elif dk < dj:
            b *= qp(dj - dk)
        num[dest] = a + b if opc == 0 else a - b
    return num[slp.out], deg[slp.out]


def eval_rational(slp: Slp, a) -> Fraction:
    """Exact value of the computed polynomial at the rational ``a``."""
    a = _as_fraction(a)
    n, d = _eval_homogeneous(slp, a.numerator, a.denominator)
    if d == 0:
        return Fraction(n)
    return Fraction(n, a.denominator**d)


def eval_mod(slp: Slp, a: int, m: int) -> int:
    """Value at the integer ``a`` reduced modulo ``m``."""
    if m < 1:
        raise ZeroModulus(f"modulus must be positive, got {m}")
    val = [0] * slp.size
    val[0] = 1 % m
    val[1] = a % m
    for dest, opc, j, k in slp._code:
        if opc == 0:
            val[dest] = (val[j] + val[k]) % m
        elif opc == 1:
            val[dest] = (val[j] - val[k]) % m
        else:
            val[dest] = val[j] * val[k] % m
    return val[slp.out]


def _eval_raw(slp: Slp, x: iv.Raw, prec: int) -> iv.Raw:
    val: list = [iv.ZERO] * slp.size
    val[0] = iv.ONE
    val[1] = x
    add, sub, mul = iv.add, iv.sub, iv.mul
    for dest, opc, j, k in slp._code:
        if opc == 2:
            val[dest] = mul(val[j], val[k], prec)
        elif opc == 0:
            val[dest] = add(val[j], val[k], prec)
        else:
            val[dest] = sub(val[j], val[k], prec)
    return val[slp.out]


def eval_interval(slp: Slp, a, precision_bits: int) -> iv.Interval:
    """Certified enclosure of ``f(a)`` using ``precision_bits``-bit endpoints."""
    if precision_bits < 16:
        raise ValueError("precision_bits must be at least 16")
    a = _as_fraction(a)
    x = iv.from_rational(a.numerator, a.denominator, precision_bits)
    return iv.Interval.from_raw(_eval_raw(slp, x, precision_bits))


def estimated_exact_bits(slp: Slp, p: int, q: int) -> float:
    """Upper bound on the bit size of the integers exact evaluation produces."""
    h = max(abs(p), abs(q), 2).bit_length()
    deg = slp._degrees
    nb = slp._norm_bits
    best = 1.0
    for dest, _, _, _ in slp._code:
        best = max(best, nb[dest] + deg[dest] * h)
    return best


def sign_at_rational(
    slp: Slp,
    p: int,
    q: int = 1,
    *,
    start_bits: int = DEFAULT_START_BITS,
    precision_cap: int = DEFAULT_PRECISION_CAP,
) -> int:
    """Exact sign of ``f(p/q)``.

    Interval evaluation is tried at ``start_bits`` and doubled up to
    ``precision_cap``; once an enclosure straddles zero and exact evaluation
    is estimated to be cheap, or the cap is reached, the value is computed
    exactly.
    """
    if q == 0:
        raise ZeroDenominator("q must be nonzero")
    if q < 0:
        p, q = -p, -q
    require_valid(slp)
    if slp.out < 2:
        return 1 if slp.out == 0 else (p > 0) - (p < 0)
    prec = max(16, start_bits)
    exact_bits = None
    while prec <= precision_cap:
        x = iv.from_rational(p, q, prec)
        lo, hi, _ = _eval_raw(slp, x, prec)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if exact_bits is None:
            exact_bits = estimated_exact_bits(slp, p, q)
        if exact_bits <= max(EXACT_SHORTCUT_BITS, 2 * prec):
            break
        prec *= 2
    n, _ = _eval_homogeneous(slp, p, q)
    return (n > 0) - (n < 0)


# --- construction -----------------------------------------------------------


class SlpBuilder:
    """Incremental program construction with optional hash-consing."""

    ONE = 0
    X = 1

    def __init__(self, dedupe: bool = True):
        self.ops: list[tuple[str, int, int]] = []
        self.dedupe = dedupe
        self._memo: dict[tuple[str, int, int], int] = {}
        self._ints: dict[int, int] = {1: 0}

    def op(self, kind: str, j: int, k: int) -> int:
        if self.dedupe:
            key = (kind, min(j, k), max(j, k)) if kind != "sub" else (kind, j, k)
            hit = self._memo.get(key)
            if hit is not None:
                return hit
        self.ops.append((kind, j, k))
        idx = len(self.ops) + 1
        if self.dedupe:
            self._memo[key] = idx
        return idx

    def add(self, j: int, k: int) -> int:
        return self.op("add", j, k)

    def sub(self, j: int, k: int) -> int:
        return self.op("sub", j, k)

    def mul(self, j: int, k: int) -> int:
        return self.op("mul", j, k)

    def zero(self) -> int:
        return self.integer_binary(0)

    def integer_binary(self, c: int) -> int:
        """Node computing ``c`` by doubling, ``<= 2 * bitlen(c)`` new nodes."""
        hit = self._ints.get(c)
        if hit is not None:
            return hit
        if c == 0:
            node = self.sub(0, 0)
        elif c < 0:
            node = self.sub(self.zero(), self.integer_binary(-c))
        else:
            node = 0
            for bit in bin(c)[3:]:
                node = self.add(node, node)
                if bit == "1":
                    node = self.add(node, 0)
        self._ints[c] = node
        return node

    def integer(self, c: int, digit_bits: int = 8) -> int:
        """Node computing ``c``; large values go through a shared radix so
        that many constants in one program reuse the digit nodes."""
        hit = self._ints.get(c)
        if hit is not None:
            return hit
        radix = 1 << digit_bits
        if c < 0:
            node = self.sub(self.zero(), self.integer(-c, digit_bits))
        elif c < radix * radix:
            node = self.integer_binary(c) if c < radix else self._radix_step(c, digit_bits)
        else:
            node = self._radix_step(c, digit_bits)
        self._ints[c] = node
        return node

    def _radix_step(self, c: int, digit_bits: int) -> int:
        radix = 1 << digit_bits
        head = self.integer(c >> digit_bits, digit_bits)
        node = self.mul(head, self.integer_binary(radix))
        low = c & (radix - 1)
        if low:
            node = self.add(node, self.integer_binary(low))
        return node

    def embed(self, slp: Slp, x_node: int = 1) -> int:
        """Copy ``slp`` in, substituting ``x_node`` for its X; return its out."""
        remap = [0, x_node]
        base = len(self.ops) + 2
        for i, (kind, j, k) in enumerate(slp.ops):
            if self.dedupe:
                remap.append(self.op(kind, remap[j], remap[k]))
            else:
                self.ops.append((kind, remap[j], remap[k]))
                remap.append(base + i)
        return remap[slp.out]

    def build(self, out: int) -> Slp:
        return Slp(tuple(self.ops), out)


def x_program() -> Slp:
    return Slp((), 1)


def one_program() -> Slp:
    return Slp((), 0)


def slp_from_integer(k: int) -> Slp:
    """Program computing the constant ``k`` (length ``<= 2 * bitlen|k| + 2``)."""
    b = SlpBuilder(dedupe=False)
    return b.build(b.integer_binary(k))


def _concat(f: Slp, g: Slp, g_x: int = 1) -> tuple[list, int, int]:
    """Ops of ``f`` followed by ``g`` (with X of g bound to ``g_x``)."""
    require_valid(f)
    require_valid(g)
    ops = list(f.ops)
    base = len(ops) + 2

    def rm(i: int) -> int:
        if i == 0:
            return 0
        if i == 1:
            return g_x
        return i - 2 + base

    ops.extend((kind, rm(j), rm(k)) for kind, j, k in g.ops)
    return ops, f.out, rm(g.out)


def compose(f: Slp, g: Slp) -> Slp:
    """Program for ``f(g(x))``; length is exactly ``len(f) + len(g)``."""
    require_valid(f)
    require_valid(g)
    ops = list(g.ops)
    base = len(ops) + 2

    def rm(i: int) -> int:
        if i == 0:
            return 0
        if i == 1:
            return g.out
        return i - 2 + base

    ops.extend((kind, rm(j), rm(k)) for kind, j, k in f.ops)
    return Slp(tuple(ops), rm(f.out))


def _binary(kind: str, f: Slp, g: Slp) -> Slp:
    ops, fo, go = _concat(f, g)
    ops.append((kind, fo, go))
    return Slp(tuple(ops), len(ops) + 1)


def add(f: Slp, g: Slp) -> Slp:
    return _binary("add", f, g)


def sub(f: Slp, g: Slp) -> Slp:
    return _binary("sub", f, g)


def mul(f: Slp, g: Slp) -> Slp:
    return _binary("mul", f, g)


def square(f: Slp) -> Slp:
    require_valid(f)
    ops = list(f.ops) + [("mul", f.out, f.out)]
    return Slp(tuple(ops), len(ops) + 1)


def power(f: Slp, e: int) -> Slp:
    """``f**e`` by square-and-multiply, at most ``2 * bitlen(e)`` extra nodes."""
    if e < 0:
        raise ValueError("exponent must be natural")
    require_valid(f)
    if e == 0:
        return one_program()
    ops = list(f.ops)
    base = f.out
    acc = base
    for bit in bin(e)[3:]:
        ops.append(("mul", acc, acc))
        acc = len(ops) + 1
        if bit == "1":
            ops.append(("mul", acc, base))
            acc = len(ops) + 1
    return Slp(tuple(ops), acc)


def sum_of_squares(programs: Iterable[Slp]) -> Slp:
    """Program for the sum of the squares of the given programs."""
    b = SlpBuilder(dedupe=False)
    acc = None
    for prog in programs:
        out = b.embed(prog)
        sq = b.mul(out, out)
        acc = sq if acc is None else b.add(acc, sq)
    if acc is None:
        return b.build(b.zero())
    return b.build(acc)


# --- degree and dense expansion ---------------------------------------------


def degree_bound(slp: Slp) -> int:
    """Formal degree of the output (exact unless cancellation occurs)."""
    require_valid(slp)
    return slp._degrees[slp.out]


def slp_to_dense(slp: Slp, max_degree: int):
    """Expand into a :class:`DensePoly`; raise :class:`DegreeExceeded` as soon
    as some node needed for the output is known to exceed ``max_degree``."""
    from .densepoly import DensePoly, int_poly_mul

    require_valid(slp)
    coeffs: list = [None] * slp.size
    coeffs[0] = [1]
    coeffs[1] = [0, 1]
    for dest, opc, j, k in slp._code:
        a, b = coeffs[j], coeffs[k]
        if opc == 2:
            if not a or not b:
                coeffs[dest] = []
                continue
            d = len(a) + len(b) - 2
            if d > max_degree:
                raise DegreeExceeded(d, max_degree)
            coeffs[dest] = int_poly_mul(a, b)
        else:
            if len(a) < len(b):
                r = list(b) if opc == 0 else [-c for c in b]
                for i, c in enumerate(a):
                    r[i] += c
            else:
                r = list(a)
                if opc == 0:
                    for i, c in enumerate(b):
                        r[i] += c
                else:
                    for i, c in enumerate(b):
                        r[i] -= c
            while r and r[-1] == 0:
                r.pop()
            coeffs[dest] = r
    result = coeffs[slp.out]
    if len(result) - 1 > max_degree:
        raise DegreeExceeded(len(result) - 1, max_degree)
    return DensePoly(result)


# --- text format ------------------------------------------------------------

_INSTR = re.compile(r"^(add|sub|mul) (0|[1-9][0-9]*) (0|[1-9][0-9]*)$")
_OUT = re.compile(r"^out (0|[1-9][0-9]*)$")


def serialize_slp(slp: Slp) -> str:
    require_valid(slp)
    lines = ["slpv1"]
    lines.extend(f"{kind} {j} {k}" for kind, j, k in slp.ops)
    lines.append(f"out {slp.out}")
    return "\n".join(lines) + "\n"


def parse_slp(text: str) -> Slp:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    numbered = [(n, ln) for n, ln in enumerate(lines, start=1) if not ln.startswith("#")]
    if not numbered or numbered[0][1] != "slpv1":
        line = numbered[0][0] if numbered else 1
        raise SlpSyntaxError(line, "expected header 'slpv1'")
    ops: list[tuple[str, int, int]] = []
    out = None
    for n, ln in numbered[1:]:
        if out is not None:
            raise SlpSyntaxError(n, "content after 'out' line")
        m = _INSTR.match(ln)
        if m:
            ops.append((m.group(1), int(m.group(2)), int(m.group(3))))
            continue
        m = _OUT.match(ln)
        if m:
            out = int(m.group(1))
            continue
        raise SlpSyntaxError(n, f"cannot parse {ln!r}")
    if out is None:
        raise SlpSyntaxError(len(lines) + 1, "missing 'out' line")
    slp = Slp(tuple(ops), out)
    require_valid(slp)
    return slp


__all__ = [
    "Slp",
    "SlpNode",
    "SlpBuilder",
    "Add",
    "Sub",
    "Mul",
    "ONE_NODE",
    "X_NODE",
    "validate",
    "require_valid",
    "eval_rational",
    "eval_mod",
    "eval_interval",
    "sign_at_rational",
    "estimated_exact_bits",
    "slp_from_integer",
    "x_program",
    "one_program",
    "compose",
    "add",
    "sub",
    "mul",
    "square",
    "power",
    "sum_of_squares",
    "degree_bound",
    "slp_to_dense",
    "serialize_slp",
    "parse_slp",
]
