"""Backend selection for the bit-row kernels.

The compiled extension is used when it imports; setting ``SUPALG_PURE=1``
forces the fallback.  ``BACKEND`` names the active one.
"""

import os

from . import _pykernels

if os.environ.get("SUPALG_PURE") == "1":
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

compose_rows = _impl.compose_rows
transitive_closure_rows = _impl.transitive_closure_rows
apply_op_rows = _impl.apply_op_rows
