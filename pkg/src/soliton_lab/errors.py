"""
Exception hierarchy for soliton-lab.

Three families map onto CLI exit codes:
    ConfigError             -> 2
    NumericalFailure        -> 3
    ClassificationFailure   -> 4

InvalidInputError is also a ValueError so library callers can catch it the usual way.
"""


class SolitonLabError(Exception):
    """Base class for all soliton-lab errors."""


class ConfigError(SolitonLabError):
    """Raised when a run configuration cannot be loaded or validated."""


class InvalidInputError(SolitonLabError, ValueError):
    """Raised when an operation receives arguments outside its domain."""


class PreconditionError(InvalidInputError):
    """Raised when a model-level precondition fails (e.g. phi0 != psi0 for the BPS reduction)."""


class OrbitDomainError(InvalidInputError):
    """Raised when the D-orbit law is evaluated where its logarithms are singular."""


class InvalidPumpError(InvalidInputError):
    """Raised when an amplitude pump would move the boundary values off vacuum."""


class NumericalFailure(SolitonLabError):
    """Base class for failures of the numerical schemes."""


class NonConvergenceError(NumericalFailure):
    """Raised when an integration diverges or a minimization fails to converge."""


class BlowUpError(NumericalFailure):
    """Raised when time evolution produces non-finite or runaway field values."""

    def __init__(self, step_index: int, message: str = ""):
        self.step_index = step_index
        super().__init__(message or f"Field blow-up detected at step {step_index}")


class ClassificationFailure(SolitonLabError):
    """Base class for states that cannot be labelled topologically."""


class UnclassifiableStateError(ClassificationFailure):
    """Raised when the boundary values of a state are not close to a vacuum."""


class MultiSolitonError(ClassificationFailure):
    """Raised when the boundary vacua are not adjacent, so the state holds several solitons."""


class TrackingAmbiguousError(ClassificationFailure):
    """Raised when soliton zones cannot be separated by near-vacuum plateaus."""
