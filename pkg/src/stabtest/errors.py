"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes (2, 3, 4); everything else is a bug.
"""


class StabtestError(Exception):
    """Base class for errors raised deliberately by this package."""


class ConfigurationError(StabtestError, ValueError):
    """Bad parameters: wrong ordering, out-of-range values, malformed input."""


class DimensionError(ConfigurationError):
    """Operands that disagree on the qubit count."""


class PreconditionError(ConfigurationError):
    """An operation was called on an input that violates its precondition."""


class ResourceGuardError(StabtestError):
    """A requested size exceeds a configured cap."""


class NumericalIntegrityError(StabtestError, ArithmeticError):
    """A floating-point result failed a tolerance check (e.g. a non-real expectation)."""


class InternalConsistencyError(StabtestError, AssertionError):
    """A self-check on a constructed object failed."""
