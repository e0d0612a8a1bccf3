"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
fallback. Setting ``PERRON_EIG_BACKEND=python`` forces the fallback.
"""
import os

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    BACKENDS["cython"] = _compiled

if os.environ.get("PERRON_EIG_BACKEND", "").lower() == "python" or _compiled is None:
    impl = _kernels_py
    name = "python"
else:
    impl = _compiled
    name = "cython"


def use(backend):
    """Switch the active backend (``"cython"`` or ``"python"``) at runtime."""
    global impl, name
    try:
        impl = BACKENDS[backend]
    except KeyError:
        raise ValueError(f"backend {backend!r} unavailable; have {sorted(BACKENDS)}") from None
    name = backend
