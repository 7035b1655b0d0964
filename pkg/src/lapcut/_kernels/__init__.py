"""Kernel selection: compiled extension if present, numpy fallback otherwise.

The choice is made once at import.  Set LAPCUT_PURE_PYTHON=1 to force the
fallback even when the extension is built (used by the parity tests and the
kernel benchmark).
"""

import os

from . import _fallback

fallback = _fallback
compiled = None

if not os.environ.get("LAPCUT_PURE_PYTHON"):
    try:
        from . import _core as compiled  # type: ignore[no-redef]
    except ImportError:
        compiled = None
else:  # forced fallback: still try to expose the extension for benchmarks
    try:
        from . import _core as compiled  # type: ignore[no-redef]
    except ImportError:
        compiled = None

if compiled is not None and not os.environ.get("LAPCUT_PURE_PYTHON"):
    active = compiled
else:
    active = _fallback

HAVE_COMPILED = compiled is not None
ACTIVE_NAME = "compiled" if active is not fallback else "python"
