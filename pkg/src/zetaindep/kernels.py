"""Hot-loop kernels, compiled when available.

The Cython extension ``_ckernels`` is used if it was built; otherwise the numpy
versions in ``_pykernels`` are used. Set ``ZETAINDEP_PURE_PYTHON=1`` to force
the fallback. :data:`BACKEND` names the active implementation.
"""

import os

from zetaindep import _pykernels

if os.environ.get("ZETAINDEP_PURE_PYTHON"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from zetaindep import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

zeta_main_sums = _impl.zeta_main_sums
half_sums = _impl.half_sums
closest_pair = _impl.closest_pair
pairs_within = _impl.pairs_within


def implementations():
    """Map backend name to kernel module for every importable backend."""
    impls = {"python": _pykernels}
    try:
        from zetaindep import _ckernels
    except ImportError:
        pass
    else:
        impls["cython"] = _ckernels
    return impls
