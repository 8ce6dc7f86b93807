"""Hot-loop kernels with backend selection at import time.

The compiled Cython kernel is preferred when the extension built; the
numpy implementation is the fallback.  Set ``WITWORLD_FORCE_PY_KERNELS=1``
to force the fallback (used by the benchmark and the cross-check tests).
"""

import os

if os.environ.get("WITWORLD_FORCE_PY_KERNELS"):
    from ._scan_py import bloch_margin_scan

    BACKEND = "python"
else:
    try:
        from ._scan_cy import bloch_margin_scan  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        from ._scan_py import bloch_margin_scan  # type: ignore[no-redef]

        BACKEND = "python"

__all__ = ["bloch_margin_scan", "BACKEND"]
