"""Exception hierarchy shared by the whole package.

The CLI maps these onto exit codes: parameter problems exit 2, a failing
condition (C) on an explicitly requested space exits 3, everything else 1.
"""


class EschenburgError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameters(EschenburgError, ValueError):
    """Input integers do not describe a valid object (unequal sums, even r, ...)."""


class NotInvertible(InvalidParameters):
    pass


class LensParameterError(InvalidParameters):
    pass


class ParityViolation(InvalidParameters):
    pass


class ConditionCFailure(EschenburgError):
    """The closed Kreck-Stolz formulas need a pairwise coprime row or column."""


class PrecisionExhausted(EschenburgError, RuntimeError):
    """Certified rounding did not converge; on valid input this is a bug."""


class InvariantViolation(EschenburgError, AssertionError):
    """An internal consistency check failed."""


class TableMismatch(EschenburgError):
    pass


class ConfigError(EschenburgError, RuntimeError):
    pass
