"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
module is used.  Setting ``CHFIF_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _pykernels

if os.environ.get("CHFIF_PURE_PYTHON", "") not in ("", "0"):
    kernels = _pykernels
else:
    try:
        from . import _ckernels as kernels
    except ImportError:  # extension not built
        kernels = _pykernels

BACKEND = kernels.NAME
