"""Select the kernel implementation at import.

The compiled ``_kernels_c`` extension is used when present; setting
``KAPPATWIST_PURE=1`` forces the pure-Python kernels.
"""

import os

from . import _kernels_py

kernels = _kernels_py
BACKEND = "python"

if not os.environ.get("KAPPATWIST_PURE"):
    try:
        from . import _kernels_c
    except ImportError:  # extension not built
        pass
    else:
        kernels = _kernels_c
        BACKEND = "cython"


def use(name):
    """Switch backend at runtime ("python" or "cython"); returns the module."""
    global kernels, BACKEND
    if name == "python":
        kernels = _kernels_py
    elif name == "cython":
        from . import _kernels_c

        kernels = _kernels_c
    else:
        raise ValueError(name)
    BACKEND = name
    return kernels
