"""Kernel backend selection.

The compiled Cython kernels are preferred; the pure-Python module is a
drop-in fallback producing bit-identical results. Selection happens once at
import and can be forced with DFINTERACT_BACKEND=python|cython.
"""

import os

from . import _udf_py

_requested = os.environ.get("DFINTERACT_BACKEND", "auto").lower()

if _requested == "python":
    kernels = _udf_py
elif _requested == "cython":
    from . import _udf_cy as kernels  # noqa: F401  — fail loudly if unbuilt
else:
    try:
        from . import _udf_cy as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _udf_py

BACKEND = kernels.BACKEND_NAME


def available_backends():
    """Return the importable kernel modules keyed by name."""
    out = {"python": _udf_py}
    try:
        from . import _udf_cy

        out["cython"] = _udf_cy
    except ImportError:
        pass
    return out
