"""Exception hierarchy shared by all modules."""


class SymlifeError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(SymlifeError, ValueError):
    """An input violates a documented invariant."""


class InfeasibleError(SymlifeError):
    """The optimization problem has no feasible point."""


class SolverError(SymlifeError):
    """The LP kernel failed to reach a verified optimum."""


class SymmetryError(SymlifeError):
    """A symmetry precondition (stabilizers, region shape) does not hold."""


class ReductionError(SymlifeError):
    """The problem cannot be reduced to a fundamental region."""
