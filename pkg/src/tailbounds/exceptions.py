"""Semantic exception hierarchy for the package.

Everything derives from TailBoundsError so callers can catch broadly;
the ValueError/RuntimeError mixins keep the usual Python semantics
(bad inputs vs. failed computations).
"""


class TailBoundsError(Exception):
    """Base class for all package errors."""


class ParameterError(TailBoundsError, ValueError):
    """A distribution parameter is outside its admissible range."""


class DomainError(TailBoundsError, ValueError):
    """An evaluation point lies outside the cumulant domain (-inf, xi_star)."""

    def __init__(self, message, xi=None, xi_star=None):
        super().__init__(message)
        self.xi = xi
        self.xi_star = xi_star


class RangeError(TailBoundsError, ValueError):
    """A tail abscissa lies outside the open range of K'."""

    def __init__(self, message, y=None, lo=None, hi=None):
        super().__init__(message)
        self.y = y
        self.lo = lo
        self.hi = hi


class ArgumentError(TailBoundsError, ValueError):
    """An operation precondition on its arguments is violated."""


class BracketError(TailBoundsError, ValueError):
    """A root bracket does not certify a sign change."""


class ConvergenceError(TailBoundsError, RuntimeError):
    """An iterative routine hit its iteration cap before its tolerance."""


class SolverFailure(TailBoundsError, RuntimeError):
    """A structured search exhausted its budget; diagnostics attached."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class InternalConsistencyError(TailBoundsError, RuntimeError):
    """A provably-true numeric invariant failed beyond tolerance."""
