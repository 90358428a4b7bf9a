"""Exception hierarchy shared by every module.

The three top-level families map onto CLI exit codes: parse problems (2),
resource caps (3) and internal invariant violations (4).
"""


class SlpReduceError(Exception):
    """Base class for all library errors."""


class ParseError(SlpReduceError, ValueError):
    exit_code = 2


class CapExceeded(SlpReduceError):
    exit_code = 3


class InvariantViolation(SlpReduceError):
    exit_code = 4


class InputError(SlpReduceError, ValueError):
    """A precondition on the arguments does not hold."""

    exit_code = 2


# --- straight-line programs -------------------------------------------------


class SlpError(InputError):
    pass


class ForwardReference(SlpError):
    def __init__(self, index: int):
        super().__init__(f"node {index} references a node at or after itself")
        self.index = index


class BadOutIndex(SlpError):
    def __init__(self, out: int, size: int):
        super().__init__(f"out index {out} outside 0..{size - 1}")
        self.out = out


class BadNode(SlpError):
    def __init__(self, index: int, message: str):
        super().__init__(f"node {index}: {message}")
        self.index = index


class SlpSyntaxError(ParseError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DegreeExceeded(CapExceeded):
    def __init__(self, bound: int, cap: int):
        super().__init__(f"degree {bound} exceeds cap {cap}")
        self.bound = bound
        self.cap = cap


class ZeroModulus(InputError):
    pass


class ZeroDenominator(InputError, ZeroDivisionError):
    pass


# --- dense polynomials ------------------------------------------------------


class DivisionByZeroPoly(InputError, ZeroDivisionError):
    pass


class BothZero(InputError):
    pass


class ZeroPolynomial(InputError):
    pass


class RootAtEndpoint(InputError):
    pass


class NonIntegerCoefficients(InputError):
    pass


class PolySyntaxError(ParseError):
    pass


# --- Chebychev and root indices ----------------------------------------------


class EvenT(InputError):
    pass


class TOutOfRange(InputError):
    pass


class EvenArgument(InputError):
    pass


# --- SAT --------------------------------------------------------------------


class DimacsSyntaxError(ParseError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ClauseTooLong(ParseError):
    def __init__(self, index: int):
        super().__init__(f"clause {index} has more than 3 literals")
        self.index = index


class TooManyVariables(CapExceeded):
    pass


# --- interval geometry ------------------------------------------------------


class DuplicateRoot(InputError):
    pass


class IndexOutOfRange(InputError, IndexError):
    pass


class PrecisionExhausted(CapExceeded):
    pass


# --- reductions -------------------------------------------------------------


class DegreeCapExceeded(CapExceeded):
    pass


class ExactDivisionFailed(InvariantViolation):
    pass


class OddRootCount(InvariantViolation):
    pass


class NonCoprimeModuli(InputError):
    pass
