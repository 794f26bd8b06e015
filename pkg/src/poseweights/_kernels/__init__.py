"""Kernel backend selection.

The compiled Cython kernels are preferred when the extension was built;
otherwise the pure-python implementations take over transparently.  Set
``POSEWEIGHTS_BACKEND=pure`` (or ``compiled``) to force a choice —
forcing ``compiled`` raises if the extension is unavailable.
"""
from __future__ import annotations

import os

from . import pure as _pure

_requested = os.environ.get("POSEWEIGHTS_BACKEND", "auto").strip().lower()

if _requested in ("auto", ""):
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _pure
elif _requested in ("compiled", "c"):
    from . import _ckernels as _impl  # type: ignore[attr-defined]
elif _requested in ("pure", "python"):
    _impl = _pure
else:
    raise ImportError(
        f"POSEWEIGHTS_BACKEND={_requested!r} not understood; "
        "use 'auto', 'compiled', or 'pure'"
    )

BACKEND = _impl.BACKEND_NAME
dijkstra_csr = _impl.dijkstra_csr
hop_ball_csr = _impl.hop_ball_csr


def available_backends():
    """Names of the kernel implementations importable in this environment."""
    names = ["pure"]
    try:
        from . import _ckernels  # noqa: F401
    except ImportError:
        return names
    return ["compiled"] + names
