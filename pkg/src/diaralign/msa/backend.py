"""Backend selection: compiled kernels when available, pure Python otherwise.

Set ``DIARALIGN_PURE=1`` to force the pure-Python backend (used by the
benchmark and the cross-backend equivalence tests).
"""

from __future__ import annotations

import os

from . import dp

if os.environ.get("DIARALIGN_PURE", "") not in ("", "0"):
    kernels = dp
    COMPILED = False
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]

        COMPILED = True
    except ImportError:
        kernels = dp
        COMPILED = False


def backend_name() -> str:
    return "compiled" if COMPILED else "pure"
