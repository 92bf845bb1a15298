"""Exception types shared across the package.

The CLI maps these onto exit codes, so solver code should raise the most
specific type that applies.
"""


class FgpeError(Exception):
    """Base class for all package errors."""


class ConfigurationError(FgpeError):
    """Invalid parameters, grids, or potential specifications."""


class GridMismatchError(ConfigurationError):
    """Two objects built on incompatible grids were combined."""


class NumericalConsistencyError(FgpeError):
    """An internal consistency check failed (non-real output, asymmetry, ...)."""


class ConvergenceError(FgpeError):
    """An iterative solver failed to reach its tolerance."""


class ResolutionError(FgpeError):
    """The grid cannot represent the requested object (box too small,
    dilation beyond the Nyquist band, concentration scale under 4h)."""
