"""Backend selection for the mask-table kernels.

The compiled extension is used when it imported and the table fits in
int64 arithmetic; otherwise the pure-Python kernels run on Python ints.
Set ``FINMEASURE_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels
from ._pykernels import (  # noqa: F401  (re-exported kind codes)
    FINITELY_ADDITIVE,
    MONOTONE,
    NULL_ADDITIVE,
    NULL_UNION,
    SUBADDITIVE,
)

_ckernels = None
if not os.environ.get("FINMEASURE_PURE_PYTHON"):
    try:
        from . import _ckernels  # type: ignore[no-redef]
    except ImportError:
        _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"

_INT64_HEADROOM = 1 << 62


def _compiled(vals, n):
    if _ckernels is None or n > 30:
        return None
    top = max(vals, default=0)
    if top * (n + 2) >= _INT64_HEADROOM or min(vals, default=0) < 0:
        return None
    return _ckernels


def variation_table(vals, n, emask=None):
    if emask is None:
        emask = (1 << n) - 1
    impl = _compiled(vals, n) or _pykernels
    return impl.variation_table(vals, n, emask)


def first_violation(vals, n, kind):
    impl = _compiled(vals, n) or _pykernels
    return impl.first_violation(vals, n, kind)


def atom_flags(vals, n):
    impl = _compiled(vals, n) or _pykernels
    return impl.atom_flags(vals, n)


def backends():
    """Mapping of available backend names to kernel modules."""
    out = {"python": _pykernels}
    if _ckernels is not None:
        out["cython"] = _ckernels
    return out
