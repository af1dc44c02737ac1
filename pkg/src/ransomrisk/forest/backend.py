"""Split-kernel backend selection.

The compiled kernel is picked up when the extension built; otherwise the
numpy implementation serves as a drop-in. Both implement the identical
selection rule, so trained forests do not depend on which one ran. Set
RANSOMRISK_PURE_PYTHON=1 to force the fallback (useful for benchmarking).
"""

from __future__ import annotations

import os

from . import _split_py

if os.environ.get("RANSOMRISK_PURE_PYTHON") == "1":
    _impl = _split_py
    BACKEND = "python"
else:
    try:
        from . import _split_cy as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _split_py
        BACKEND = "python"

best_split = _impl.best_split


def available_backends() -> dict[str, object]:
    """Name -> best_split callable for every importable backend."""
    backends = {"python": _split_py.best_split}
    try:
        from . import _split_cy  # type: ignore[attr-defined]

        backends["cython"] = _split_cy.best_split
    except ImportError:
        pass
    return backends
