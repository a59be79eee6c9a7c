"""Backend selection for the finite-volume hot loop.

The compiled Cython module is used when it has been built; otherwise the
numpy implementation is imported.  Set ``HYPNS_PURE_PYTHON=1`` to force the
fallback.
"""
import os

from . import _kernels_py as python_backend

compiled_backend = None
if not os.environ.get("HYPNS_PURE_PYTHON"):
    try:
        from . import _kernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

backend = compiled_backend if compiled_backend is not None else python_backend
BACKEND_NAME = "cython" if compiled_backend is not None else "numpy"

rates = backend.rates
max_speed = backend.max_speed
temperature = backend.temperature


def use(name):
    """Switch the active backend (``"cython"`` or ``"numpy"``); returns the previous name."""
    global backend, BACKEND_NAME, rates, max_speed, temperature
    previous = BACKEND_NAME
    if name == "cython":
        if compiled_backend is None:
            raise ImportError("compiled kernels are not built")
        backend = compiled_backend
    elif name == "numpy":
        backend = python_backend
    else:
        raise ValueError(f"unknown backend {name!r}")
    BACKEND_NAME = name
    rates = backend.rates
    max_speed = backend.max_speed
    temperature = backend.temperature
    return previous
