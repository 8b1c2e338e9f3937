"""Hot kernels with a compiled core and a numpy fallback.

The Cython extension is used when it was built and ``RLSC_PURE_PYTHON`` is
unset; ``BACKEND`` records which implementation was selected at import.
"""

import os

from . import _fallback

try:
    if os.environ.get("RLSC_PURE_PYTHON"):
        raise ImportError("pure-Python kernels requested")
    from . import _ckernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _fallback
    BACKEND = "python"

run_program = _impl.run_program
layered_accept = _impl.layered_accept

__all__ = ["BACKEND", "run_program", "layered_accept", "_fallback"]
