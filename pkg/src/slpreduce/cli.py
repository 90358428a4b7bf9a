"""Command-line entry point.

Exit status: 0 on success, 2 for malformed input, 3 when a degree or
precision cap is hit, 4 for an internal invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import reductions as rd
from . import slp_core as sc
from .cheb import PrimeAssignment, cheb_slp, cheb_slp_factored
from .densepoly import to_text
from .errors import CapExceeded, InputError, InvariantViolation, ParseError, SlpReduceError
from .root_geometry import partition_csv
from .sat import make_rng, parse_dimacs, serialize_dimacs, vv_reduce


@dataclass(frozen=True)
class CliConfig:
    seed: int = 0
    degree_cap: int = rd.DEFAULT_DEGREE_CAP
    precision_cap_bits: int = sc.DEFAULT_PRECISION_CAP
    prime_policy: str = "strict_n3"

    def __post_init__(self):
        if self.degree_cap < 1 or self.precision_cap_bits < 1:
            raise InputError("caps must be positive")
        if self.prime_policy not in rd.POLICIES:
            raise InputError(f"unknown prime policy {self.prime_policy!r}")
        if not 0 <= self.seed < 1 << 64:
            raise InputError("seed must fit in 64 bits")


def _rational(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None
    return value


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from None


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _format_rational(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _config(args) -> CliConfig:
    return CliConfig(
        seed=getattr(args, "seed", 0),
        degree_cap=args.degree_cap,
        precision_cap_bits=args.precision_cap,
        prime_policy=getattr(args, "policy", "strict_n3"),
    )


def _cnf_and_primes(args):
    cnf = parse_dimacs(_read(args.cnf))
    pa = PrimeAssignment(tuple(args.primes))
    return cnf, pa


# --- handlers ---------------------------------------------------------------


def _slp_eval(args, out):
    prog = sc.parse_slp(_read(args.file))
    out.write(_format_rational(sc.eval_rational(prog, args.at)) + "\n")


def _slp_sign(args, out):
    cfg = _config(args)
    prog = sc.parse_slp(_read(args.file))
    s = sc.sign_at_rational(prog, args.at.numerator, args.at.denominator,
                            precision_cap=cfg.precision_cap_bits)
    out.write(f"{s}\n")


def _slp_expand(args, out):
    prog = sc.parse_slp(_read(args.file))
    out.write(to_text(sc.slp_to_dense(prog, args.max_degree)) + "\n")


def _cheb_emit(args, out):
    if args.factors:
        prog = cheb_slp_factored(args.factors)
    elif args.k is not None:
        prog = cheb_slp(args.k)
    else:
        raise InputError("give --k or --factors")
    out.write(sc.serialize_slp(prog))


def _reduce(args, out):
    cfg = _config(args)
    cnf, pa = _cnf_and_primes(args)
    if args.what == "polysat":
        out.write(to_text(rd.polysat_dense(cnf, pa, cfg.degree_cap)) + "\n")
    elif args.what == "clause":
        if not 0 <= args.clause_index < cnf.m:
            raise InputError(f"clause index {args.clause_index} outside 0..{cnf.m - 1}")
        out.write(sc.serialize_slp(rd.clause_slp(cnf.clauses[args.clause_index], pa).slp))
    elif args.what == "sos":
        out.write(sc.serialize_slp(rd.sos_slp(cnf, pa).slp))
    else:
        out.write(sc.serialize_slp(rd.radical_slp(rd.sos_slp(cnf, pa), cfg.degree_cap).slp))


def _geometry(args, out):
    cnf, pa = _cnf_and_primes(args)
    text = partition_csv(rd.root_partition(cnf, pa))
    if args.out == "-":
        out.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _decide(args, out):
    cfg = _config(args)
    cnf = parse_dimacs(_read(args.cnf))
    report = rd.decide_sat_via_posslp(
        cnf, cfg.seed, args.trials, cfg.prime_policy, cfg.degree_cap, cfg.precision_cap_bits
    )
    out.write(report.to_json(timing=args.timing) + "\n")


def _count(args, out):
    cfg = _config(args)
    cnf = parse_dimacs(_read(args.cnf))
    result = rd.sharp_sat_detail(cnf, args.oracle, cfg.degree_cap)
    out.write((result.to_json() if args.json else str(result.count)) + "\n")


def _vv(args, out):
    cfg = _config(args)
    cnf = parse_dimacs(_read(args.cnf))
    out.write(serialize_dimacs(vv_reduce(cnf, make_rng(cfg.seed))))


def _ineq(args, out):
    if args.emit_slp:
        out.write(sc.serialize_slp(rd.build_succinct_inequality_slp(args.a, args.b, args.c, args.d)))
        return
    cfg = _config(args)
    ok = rd.decide_succinct_inequality(args.a, args.b, args.c, args.d, cfg.precision_cap_bits)
    out.write(("true" if ok else "false") + "\n")


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--degree-cap", type=_positive, default=rd.DEFAULT_DEGREE_CAP)
    common.add_argument("--precision-cap", type=_positive, default=sc.DEFAULT_PRECISION_CAP,
                        help="bits before falling back to exact evaluation")
    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, default=0)
    with_cnf = argparse.ArgumentParser(add_help=False)
    with_cnf.add_argument("--cnf", required=True, help="DIMACS file ('-' for stdin)")
    with_primes = argparse.ArgumentParser(add_help=False)
    with_primes.add_argument("--primes", type=_int_list, required=True, help="comma-separated odd primes")

    p = argparse.ArgumentParser(prog="slpreduce", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="group", required=True)

    g = sub.add_parser("slp", help="evaluate, sign or expand a program").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("eval", parents=[common])
    c.add_argument("--at", type=_rational, required=True)
    c.add_argument("file")
    c.set_defaults(func=_slp_eval)
    c = g.add_parser("sign", parents=[common])
    c.add_argument("--at", type=_rational, required=True)
    c.add_argument("file")
    c.set_defaults(func=_slp_sign)
    c = g.add_parser("expand", parents=[common])
    c.add_argument("--max-degree", type=int, required=True)
    c.add_argument("file")
    c.set_defaults(func=_slp_expand)

    g = sub.add_parser("cheb", help="Chebyshev programs").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("emit", parents=[common])
    c.add_argument("--k", type=int)
    c.add_argument("--factors", type=_int_list)
    c.set_defaults(func=_cheb_emit)

    c = sub.add_parser("reduce", parents=[common, with_cnf, with_primes], help="formula to polynomial or program")
    c.add_argument("what", choices=["polysat", "clause", "sos", "radical"])
    c.add_argument("--clause-index", type=int, default=0)
    c.set_defaults(func=_reduce)

    g = sub.add_parser("geometry", help="root intervals").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("intervals", parents=[common, with_cnf, with_primes])
    c.add_argument("--out", required=True, help="CSV path ('-' for stdout)")
    c.set_defaults(func=_geometry)

    g = sub.add_parser("decide", help="randomized satisfiability").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("sat", parents=[common, seeded, with_cnf])
    c.add_argument("--trials", type=_positive, required=True)
    c.add_argument("--policy", choices=list(rd.POLICIES), default="strict_n3")
    c.add_argument("--timing", action="store_true", help="fill elapsed_ms (output then varies run to run)")
    c.set_defaults(func=_decide)

    g = sub.add_parser("count", help="model counting").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("sharpsat", parents=[common, with_cnf])
    c.add_argument("--oracle", choices=["combinatorial", "sturm"], default="combinatorial")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=_count)

    g = sub.add_parser("sat", help="formula transforms").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("vv", parents=[common, seeded, with_cnf])
    c.set_defaults(func=_vv)

    g = sub.add_parser("ineq", help="power product comparison").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("succinct", parents=[common])
    for name in "abcd":
        c.add_argument(f"--{name}", type=_int_list, required=True)
    c.add_argument("--emit-slp", action="store_true")
    c.set_defaults(func=_ineq)
    return p


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        args.func(args, out)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return 3
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 4
    except (InputError, SlpReduceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()
