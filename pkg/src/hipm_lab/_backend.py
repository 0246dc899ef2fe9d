"""Kernel selection: compiled extension when importable, numpy fallback otherwise.

Set ``HIPM_LAB_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _fallback

fallback = _fallback

try:
    from . import _kernels as compiled
except ImportError:  # extension not built
    compiled = None

if compiled is not None and os.environ.get("HIPM_LAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    kernels = compiled
    NAME = "compiled"
else:
    kernels = _fallback
    NAME = "python"
