"""Import-time selection of the term-arithmetic kernel.

The compiled Cython kernel is preferred; set PIERI_FORGE_PURE=1 to force the
pure-Python twin (or rely on the automatic fallback when the extension was
not built).  Both expose the same functions with identical semantics, so
results are bit-identical either way.
"""

import os

if os.environ.get("PIERI_FORGE_PURE"):
    from . import _termops_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _termops_cy as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _termops_py as _impl

        BACKEND = "python"

mul = _impl.mul
addp = _impl.addp
subp = _impl.subp
neg = _impl.neg
scale = _impl.scale
shift_scale = _impl.shift_scale
submul_inplace = _impl.submul_inplace
lead = _impl.lead
