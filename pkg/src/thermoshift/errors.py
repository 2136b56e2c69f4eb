"""Exception hierarchy.

Validation problems (bad inputs, malformed configs) are kept separate from
numerical failures (non-convergence, exhausted budgets) so the CLI can map
them to distinct exit codes.
"""


class ThermoshiftError(Exception):
    """Base class for all package errors."""


class ValidationError(ThermoshiftError, ValueError):
    """Malformed or inconsistent input."""


class UnsupportedEnumeration(ValidationError):
    """An operation that needs a finite truncation was given a countable rule."""


class NumericalError(ThermoshiftError, RuntimeError):
    """A numerical routine failed to produce a trustworthy result."""


class ConstructionFailure(NumericalError):
    """A combinatorial construction (connector search, level build) failed."""


class BudgetExceeded(NumericalError):
    """An enumeration or search exceeded its configured budget."""


class ConditionNotMet(NumericalError):
    """An applicability condition of an estimate does not hold for the inputs."""
