"""Search kernel backend selection.

The compiled extension is used when importable; otherwise the package
runs on the pure-Python fallback with identical behavior.  Set
GF2GDD_PURE=1 in the environment to force the fallback.
"""

from __future__ import annotations

import os

from . import _fallback

_impl = _fallback
if os.environ.get("GF2GDD_PURE", "0") in ("", "0"):
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _fallback

BACKEND: str = _impl.BACKEND
count_completions = _impl.count_completions
fill_completions = _impl.fill_completions
accumulate_pair_counts = _impl.accumulate_pair_counts


def backends() -> list[tuple[str, object]]:
    """(name, module) for every importable backend, compiled first."""
    found: list[tuple[str, object]] = [("python", _fallback)]
    try:
        from . import _core
        found.insert(0, ("compiled", _core))
    except ImportError:
        pass
    return found
