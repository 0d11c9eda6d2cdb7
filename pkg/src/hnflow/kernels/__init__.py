"""Hot-loop kernels: compiled extension when available, pure Python otherwise.

Set ``HNFLOW_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels as python

if os.environ.get("HNFLOW_PURE_PYTHON", "") not in ("", "0"):
    compiled = None
else:
    try:
        from . import _ckernels as compiled
    except ImportError:  # extension not built
        compiled = None

_active = compiled if compiled is not None else python

BACKEND = _active.BACKEND
enum_candidates = _active.enum_candidates
scan_prefilter = _active.scan_prefilter

__all__ = ["BACKEND", "compiled", "python", "enum_candidates", "scan_prefilter"]
