"""Exception types shared across the package.

Everything raised on purpose derives from FlipcertError so callers (and the
command line driver) can separate our failures from genuine bugs.
"""

from __future__ import annotations


class FlipcertError(Exception):
    """Base class for all intentional failures."""


class UsageError(FlipcertError):
    """Malformed input file, bad configuration, or inconsistent arguments."""


class ParseError(UsageError):
    """Text input does not match the expected grammar."""


class DagViolation(ParseError):
    """A circuit node references a node that is not strictly earlier."""


class BadArity(ParseError):
    """A circuit line carries the wrong number of operands for its kind."""


class ArityMismatch(UsageError):
    """An evaluation point has the wrong number of coordinates."""


class IndexOutOfRange(UsageError):
    """An input index is outside the circuit's declared inputs."""


class ShapeMismatch(UsageError):
    """A group element cannot act on a matrix of this shape."""


class MalformedEncoding(UsageError):
    """A binary design label fails structural decoding."""


class InvalidDesign(UsageError):
    """A design label decodes but violates the set-system constraints."""


class SingularTraceForm(FlipcertError):
    """The trace bilinear form is degenerate on the supplied basis."""


class BudgetError(FlipcertError):
    """A configured resource budget was exceeded before completion."""


class SizeLimit(BudgetError):
    """Matrix dimension above the oracle's hard cap."""


class BudgetExceeded(BudgetError):
    """Enumeration or expansion grew past its configured budget."""


class TermBudgetExceeded(BudgetExceeded):
    """Sparse polynomial expansion exceeded its term budget."""


class PoolExhausted(BudgetError):
    """The candidate point pool cannot cover the remaining circuits."""


class ConstructionFailed(BudgetError):
    """Design row construction got stuck before reaching the target count.

    rows_achieved reports how many rows were placed before failure.
    """

    def __init__(self, message: str, rows_achieved: int = 0):
        super().__init__(message)
        self.rows_achieved = rows_achieved


class NoFailingQuery(FlipcertError):
    """Every certificate query passed; no counterexample can be decoded."""


class TargetComputable(FlipcertError):
    """A class member computes the target polynomial exactly, so no

    obstruction row exists for it."""

    def __init__(self, message: str, circuit=None):
        super().__init__(message)
        self.circuit = circuit


class StaleCertificate(UsageError):
    """Certificate sections disagree with recomputation from label+config."""
