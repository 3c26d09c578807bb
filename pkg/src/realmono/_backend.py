"""Kernel selection: compiled extension when importable, pure Python otherwise.

Set ``REALMONO_PURE=1`` to force the fallback.
"""

import os

from . import _pykernels

if os.environ.get("REALMONO_PURE") == "1":
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

sqrtm_triu = _impl.sqrtm_triu
hermitian_defect = _impl.hermitian_defect

__all__ = ["BACKEND", "sqrtm_triu", "hermitian_defect"]
