"""Exception hierarchy shared by all povm_forge modules.

Three failure classes are distinguished because the CLI maps them to
distinct exit codes: bad inputs (1), numerics that did not converge at the
requested resolution (2), and requests that are physically impossible no
matter the resolution (3).
"""


class PovmForgeError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(PovmForgeError):
    """Invalid argument, configuration, or data (CLI exit code 1)."""


class GridMismatchError(ValidationError):
    """Two grids that must be conjugate or identical are not."""


class ResolutionError(PovmForgeError):
    """A numerical result failed its internal accuracy check (CLI exit code 2)."""


class BandGapError(PovmForgeError):
    """Mode matching is impossible: the filter blocks a frequency carrying
    target amplitude (CLI exit code 3)."""

    def __init__(self, message, frequency=None):
        super().__init__(message)
        self.frequency = frequency
