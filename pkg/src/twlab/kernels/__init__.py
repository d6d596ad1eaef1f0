"""Search kernels with a compiled fast path.

The compiled extension (_ckernels, built from Cython) is preferred when
importable; otherwise the pure-Python twin (_pykernels) is used.  Both
implement identical search semantics, so results — including witnesses —
do not depend on the backend.  Set TWLAB_KERNEL=py to force the pure
backend, or TWLAB_KERNEL=c to require the compiled one.
"""

import os

from twlab.kernels import _pykernels

_mode = os.environ.get("TWLAB_KERNEL", "")
if _mode == "py":
    _impl = _pykernels
else:
    try:
        from twlab.kernels import _ckernels as _impl
    except ImportError:
        if _mode == "c":
            raise
        _impl = _pykernels

BACKEND = _impl.BACKEND

orient_search = _impl.orient_search
list_color_search = _impl.list_color_search
gensat_search = _impl.gensat_search
exact_treewidth = _impl.exact_treewidth
