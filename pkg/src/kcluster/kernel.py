"""Select the one-pass kernel: compiled if importable, else pure Python.

Set ``KCLUSTER_PURE_PYTHON=1`` to force the fallback.
"""

import os

from ._kernel_py import OnePass as OnePassPy

OnePassCy = None
if not os.environ.get("KCLUSTER_PURE_PYTHON"):
    try:  # pragma: no cover - depends on the build
        from ._kernel import OnePass as OnePassCy
    except ImportError:  # pragma: no cover
        OnePassCy = None

OnePass = OnePassCy if OnePassCy is not None else OnePassPy
BACKEND = "cython" if OnePassCy is not None else "python"


def get(backend=None):
    """Kernel class for ``backend`` in {None, "python", "cython"}."""
    if backend is None:
        return OnePass
    if backend == "python":
        return OnePassPy
    if backend == "cython":
        if OnePassCy is None:
            raise RuntimeError("compiled kernel is not available")
        return OnePassCy
    raise ValueError(f"unknown backend {backend!r}")
