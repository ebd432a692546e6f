"""High-precision zeros of the Riemann zeta function and their tables."""

from zetaindep.zerolab.compute import (
    VerificationReport,
    compute_zeros,
    isolate_zeros,
    smooth_count,
    verify_zeros,
    zeta_prime_at,
)
from zetaindep.zerolab.table import (
    ZeroRecord,
    ZeroTable,
    dumps,
    export_zeros,
    import_zeros,
    loads,
    radius_for,
)

__all__ = [
    "VerificationReport",
    "ZeroRecord",
    "ZeroTable",
    "compute_zeros",
    "dumps",
    "export_zeros",
    "import_zeros",
    "isolate_zeros",
    "loads",
    "radius_for",
    "smooth_count",
    "verify_zeros",
    "zeta_prime_at",
]
