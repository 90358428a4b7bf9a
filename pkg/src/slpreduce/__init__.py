"""Exact straight-line programs, Chebyshev root combinatorics and the
reductions from 3SAT and #3SAT to signs and real-root counts."""

from .cheb import PrimeAssignment, cheb_dense, cheb_slp, cheb_slp_factored
from .densepoly import DensePoly
from .errors import SlpReduceError
from .sat import Cnf, parse_dimacs
from .slp_core import Slp, eval_rational, parse_slp, serialize_slp, sign_at_rational

__version__ = "0.1.0"

__all__ = [
    "Cnf",
    "DensePoly",
    "PrimeAssignment",
    "Slp",
    "SlpReduceError",
    "cheb_dense",
    "cheb_slp",
    "cheb_slp_factored",
    "eval_rational",
    "parse_dimacs",
    "parse_slp",
    "serialize_slp",
    "sign_at_rational",
]
