"""Exception hierarchy.

Every error raised by this package derives from LongCycleError so callers
can catch one type. The CLI maps subclasses to exit codes (see cli.py).
"""


class LongCycleError(Exception):
    """Base class for all package errors."""


class ArgumentError(LongCycleError, ValueError):
    """Invalid argument value or combination."""


class DataError(LongCycleError):
    """Malformed or insufficient input data (CSV parsing, short series)."""


class SingularityError(LongCycleError):
    """A required matrix inversion is numerically singular.

    Carries the observed condition number when available.
    """

    def __init__(self, message: str, condition: float | None = None):
        super().__init__(message)
        self.condition = condition


class NumericalError(LongCycleError):
    """A computation produced non-finite values or failed to converge."""


class QuadratureError(NumericalError):
    """Requested quadrature tolerance was not achieved.

    Carries the tolerance actually attained.
    """

    def __init__(self, message: str, achieved: float):
        super().__init__(message)
        self.achieved = achieved


class TableError(LongCycleError):
    """Base class for critical-value table problems."""


class TableFormatError(TableError):
    """Unreadable table file (bad header or rows)."""


class TableVersionError(TableFormatError):
    """Table file uses an unknown schema version."""


class TableChecksumError(TableFormatError):
    """Table file content does not match its recorded checksum."""


class TableRangeError(TableError):
    """Lookup outside the table's bounding box; message names the bound."""


class CacheMissError(TableError):
    """No cached table for the requested configuration.

    The message includes the command to build one.
    """
