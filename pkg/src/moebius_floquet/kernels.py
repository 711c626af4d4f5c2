"""Backend selection for the integration kernels.

The compiled ``_kernels`` extension is used when it imports; otherwise, or
when ``MOEBIUS_FLOQUET_PURE_PYTHON`` is set to a non-empty value other than
``0``, the pure-Python ``_kernels_py`` twin is used.
"""
import importlib
import os

from . import _kernels_py

_forced = os.environ.get("MOEBIUS_FLOQUET_PURE_PYTHON", "") not in ("", "0")

if _forced:
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

hill_advance = _impl.hill_advance
rk4_schrodinger = _impl.rk4_schrodinger


def available_backends():
    names = ["python"]
    try:
        importlib.import_module(f"{__package__}._kernels")
        names.insert(0, "cython")
    except ImportError:
        pass
    return names


def get_backend(name=None):
    """Kernel module by name (``"cython"`` or ``"python"``); default: active."""
    if name is None:
        return _impl
    if name == "python":
        return _kernels_py
    if name == "cython":
        return importlib.import_module(f"{__package__}._kernels")
    raise ValueError(f"unknown backend {name!r}")
