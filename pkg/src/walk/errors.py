"""Error types raised by the walk, search and experiment modules.

Every error carries the process exit code the command line reports for it:
2 for invalid input, 3 for numerical failures, 4 for output failures.
"""


class ChiralWalkError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class InvalidParameterError(ChiralWalkError, ValueError):
    exit_code = 2


class DomainError(InvalidParameterError):
    """A closed form was evaluated outside the range where it is defined."""


class InvalidStateError(InvalidParameterError):
    """A state vector is not normalised or has the wrong shape."""


class NumericalError(ChiralWalkError):
    exit_code = 3


class CriticalThetaError(NumericalError):
    """A walk eigenvalue other than the j = 0 one is zero, so S_i diverges."""


class PoleEvaluationError(NumericalError):
    pass


class BracketingError(NumericalError):
    pass


class EigensolverError(NumericalError):
    pass


class OutputError(ChiralWalkError):
    exit_code = 4
