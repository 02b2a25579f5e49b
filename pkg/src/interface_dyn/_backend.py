"""Kernel backend selection.

The O(N^2) quadrature kernels exist twice: a compiled Cython extension
(interface_dyn._kernels) and a vectorized numpy reference
(interface_dyn._kernels_np).  The compiled one is preferred when the
extension built; INTERFACE_DYN_BACKEND=py|c forces a choice.  Both are
sequential, so INTERFACE_DYN_THREADS (parsed in the CLI) is honored by
construction.
"""
import os

from . import _kernels_np

_impl = None
BACKEND = "py"

_forced = os.environ.get("INTERFACE_DYN_BACKEND", "").strip().lower()
if _forced not in ("", "py", "c"):
    raise ImportError(f"INTERFACE_DYN_BACKEND must be 'py' or 'c', got {_forced!r}")

if _forced != "py":
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "c"
    except ImportError:
        _impl = None
        if _forced == "c":
            raise

if _impl is None:
    _impl = _kernels_np
    BACKEND = "py"

br_build_closed = _impl.br_build_closed
br_build_periodic = _impl.br_build_periodic
corr_closed = _impl.corr_closed
corr_periodic = _impl.corr_periodic
chord_scan_closed = _impl.chord_scan_closed
chord_scan_periodic = _impl.chord_scan_periodic
