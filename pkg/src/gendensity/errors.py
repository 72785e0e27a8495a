"""Exception types shared across the package."""


class GendensityError(Exception):
    """Base class for all errors raised by this package."""


class InputDimensionError(GendensityError, ValueError):
    """A vector or matrix has the wrong shape for the requested operation."""


class GeneratorLoadError(GendensityError):
    """A network file is malformed, inconsistent, or fails its recorded replay."""


class UnsupportedOperationError(GendensityError):
    """The operation is not defined for this generator kind."""


class NumericalError(GendensityError):
    """A computation produced non-finite values or failed to converge."""


class DegeneratePointError(GendensityError):
    """The map has rank zero at this point; the induced density is undefined."""


class DegenerateDirectionError(GendensityError):
    """The requested singular direction is below the rank threshold.

    Profiles along such directions carry essentially no information; pass
    ``allow_degenerate=True`` (CLI: ``--allow-degenerate``) to build one
    deliberately.
    """


class ScoreUndefinedError(GendensityError):
    """A score cannot be formed because a required sample is flagged."""


class EmptyProfileError(GendensityError):
    """Every sample of a profile is degenerate; nothing to report."""


class EmptyReportError(GendensityError):
    """All paths or decay terms were excluded; no score can be aggregated."""
