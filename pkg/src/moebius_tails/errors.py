"""Exception hierarchy shared by every module.

Two families matter to callers (and to the CLI's exit codes): domain and
validation problems (bad inputs, capacity, malformed files) and numeric
non-convergence.
"""


class MoebiusLabError(Exception):
    """Base class for all library errors."""


class DomainError(MoebiusLabError, ValueError):
    """Argument outside the region where an operation is defined."""


class DivergentSeriesError(DomainError):
    """Series requested outside its region of convergence."""


class PoleError(DomainError):
    """Evaluation requested at (or numerically on top of) a pole."""


class PoleProximityError(PoleError):
    """Evaluation point closer to a singularity than the guard radius."""


class AccuracyError(DomainError):
    """Requested point lies beyond the configured validity bound of an evaluator."""


class CapacityError(DomainError):
    """Sieve or summation range beyond the configured global maximum."""


class ToleranceUnreachableError(DomainError):
    """No cutoff within capacity meets the requested truncation tolerance."""


class MonotonicityError(DomainError):
    """A sequence required to be decreasing (or increasing) is not."""


class ZeroTableError(DomainError):
    """Malformed or inconsistent zero table."""


class ZeroTableParseError(ZeroTableError):
    def __init__(self, path, lineno, line):
        self.path = path
        self.lineno = lineno
        self.line = line
        super().__init__(f"{path}:{lineno}: cannot parse ordinate {line!r}")


class EnclosureError(DomainError):
    """A circle contour does not isolate exactly one singularity cluster."""


class FitError(DomainError):
    """Base class for exponent-fit failures."""


class InsufficientSpanError(FitError):
    pass


class DegenerateFitError(FitError):
    pass


class ConvergenceError(MoebiusLabError, ArithmeticError):
    """Iterative or adaptive numerics exceeded their budget."""
