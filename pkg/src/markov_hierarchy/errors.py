"""Exception types raised by the library.

Numerical failures derive from :class:`NumericalError` so the CLI can map
them to a single exit code; everything else is a plain ``ValueError``.
"""


class NumericalError(ArithmeticError):
    """Base class for failures of the numerical pipeline."""


class NotHermitian(NumericalError, ValueError):
    pass


class NoConvergence(NumericalError):
    pass


class NotPositiveDefinite(NumericalError, ValueError):
    pass


class SingularBlock(NumericalError):
    """The irrelevant block is (numerically) singular.

    Usually means a resonant state was put in the irrelevant sector, or a
    picture shift landed on an eigenvalue of ``-delta``.  ``stage`` is set
    when the failure happened inside a multi-step elimination.
    """

    def __init__(self, message: str, stage: int | None = None):
        self.stage = stage
        if stage is not None:
            message = f"stage {stage}: {message}"
        super().__init__(message)


class SearchFailed(NumericalError):
    pass


class GridTooCoarse(NumericalError, ValueError):
    pass


class UnsupportedOrder(ValueError):
    pass


class DegenerateAdjacentLevels(ValueError):
    pass


class InitialStateOutsideRelevant(ValueError):
    pass


class GridMismatch(ValueError):
    pass
