"""Exception hierarchy; each class carries the CLI exit code it maps to."""


class ZetaIndepError(Exception):
    exit_code = 4


class PrecisionError(ZetaIndepError):
    """Inputs are not known to enough digits for the requested operation."""

    exit_code = 2


class MalformedInputError(ZetaIndepError, ValueError):
    """A file or argument does not conform to its declared format."""

    exit_code = 3


class IsolationError(PrecisionError):
    """Zero bracketing failed: a sign change could not be located or counts disagree."""


class InvariantError(ZetaIndepError):
    """An internal consistency check failed."""

    exit_code = 4


class DegenerateBasisError(InvariantError):
    """A lattice basis turned out to be linearly dependent."""
