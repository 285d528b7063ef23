"""Kernel backend selection.

The compiled extension ``nttmul._kernels`` is preferred when importable; the
pure-Python twin ``nttmul._kernels_py`` is the fallback.  Both expose the same
function surface and produce bit-identical results and operation counts.

Set the environment variable ``NTTMUL_BACKEND=python`` (or call
:func:`set_backend`) to force the fallback, e.g. for benchmarking the two
implementations against each other.
"""

from __future__ import annotations

import os

from . import _kernels_py

try:
    from . import _kernels as _native
except ImportError:  # extension not built
    _native = None

_forced: str | None = None
if os.environ.get("NTTMUL_BACKEND") in ("python", "native"):
    _forced = os.environ["NTTMUL_BACKEND"]


def native_available() -> bool:
    return _native is not None


def set_backend(name: str) -> None:
    """Force 'python' or 'native', or 'auto' to restore the default."""
    global _forced
    if name == "auto":
        _forced = None
        return
    if name not in ("python", "native"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "native" and _native is None:
        raise RuntimeError("compiled kernels are not available")
    _forced = name


def active() -> str:
    if _forced is not None:
        return _forced
    return "native" if _native is not None else "python"


def kernels():
    """The active kernel module."""
    return _native if active() == "native" else _kernels_py


def get(name: str):
    """A specific kernel module by backend name."""
    if name == "python":
        return _kernels_py
    if name == "native":
        if _native is None:
            raise RuntimeError("compiled kernels are not available")
        return _native
    raise ValueError(f"unknown backend {name!r}")
