"""Certified bounded linear independence of zeta zeros and Mertens-function bounds."""

__version__ = "0.1.0"

from zetaindep.errors import (  # noqa: E402
    DegenerateBasisError,
    InvariantError,
    IsolationError,
    MalformedInputError,
    PrecisionError,
    ZetaIndepError,
)

__all__ = [
    "DegenerateBasisError",
    "InvariantError",
    "IsolationError",
    "MalformedInputError",
    "PrecisionError",
    "ZetaIndepError",
    "__version__",
]
