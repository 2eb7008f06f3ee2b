"""Exception types shared across the package.

The CLI maps these onto process exit codes, so library code should raise
the most specific class that applies rather than bare ValueError.
"""


class ValidationError(ValueError):
    """A precondition on user-supplied data failed (bad range, odd period, ...)."""


class RationalThetaError(ValidationError):
    """A rotation number turned out rational (its continued fraction terminated)."""


class NumericAssertionError(ArithmeticError):
    """An internal numeric consistency check failed (e.g. a trace that must be
    real came back with a large imaginary part)."""


class ResourceCapError(RuntimeError):
    """A computation was aborted because it exceeded a configured size cap."""
