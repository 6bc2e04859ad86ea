class FlipQCError(Exception):
    """Base class for library errors."""


class ConfigError(FlipQCError, ValueError):
    """Invalid or non-generic input data."""


class NumericalError(FlipQCError, ArithmeticError):
    """Solver non-convergence, overflow or an unusable numerical regime."""


class SectorWarning(UserWarning):
    """A ray or argument lies outside the sector where an expansion is valid."""


class PrecisionWarning(UserWarning):
    """Cancellation or tiny/huge magnitudes degrade a result."""
