import os
from fractions import Fraction

import mpmath
import sympy
from hypothesis import HealthCheck, settings

from slpreduce.densepoly import DensePoly

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# oracle precision for every test module; tests needing more raise it locally
mpmath.mp.prec = 400

X = sympy.Symbol("x")


def to_sympy(f: DensePoly) -> sympy.Poly:
    """Independent representation for cross-checks."""
    cs = [sympy.Rational(c.numerator, c.denominator) for c in reversed(f.coeffs)]
    return sympy.Poly(cs or [0], X, domain="QQ")


def from_sympy(p: sympy.Poly) -> DensePoly:
    cs = [Fraction(int(c.p), int(c.q)) for c in reversed(p.all_coeffs())]
    return DensePoly(cs)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
