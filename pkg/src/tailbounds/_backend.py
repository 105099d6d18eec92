"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-Python
fallback in ``_generic`` is used otherwise, and always for custom
models.  Selection happens at import time and can be pinned with the
``TAILBOUNDS_BACKEND`` environment variable (``compiled`` / ``python``)
or switched at runtime with :func:`set_backend` (used by the backend
benchmark and the equivalence tests).
"""

from __future__ import annotations

import os

try:
    from . import _core
except ImportError:  # extension not built; pure-Python fallback
    _core = None

_VALID = ("auto", "compiled", "python")


def _resolve(requested: str) -> str:
    if requested not in _VALID:
        raise ValueError(f"backend must be one of {_VALID}, got {requested!r}")
    if requested == "compiled" and _core is None:
        raise RuntimeError("compiled backend requested but tailbounds._core is not built")
    if requested == "auto":
        return "compiled" if _core is not None else "python"
    return requested


_active = _resolve(os.environ.get("TAILBOUNDS_BACKEND", "auto").strip().lower())


def has_compiled() -> bool:
    return _core is not None


def backend_name() -> str:
    """Name of the backend currently serving catalog models."""
    return _active


def set_backend(name: str) -> None:
    """Pin the kernel backend: 'compiled', 'python', or 'auto'."""
    global _active
    _active = _resolve(name)


def compiled_key(model):
    """The (family, p0, p1) dispatch key, or None when the generic path applies."""
    if _active == "compiled" and model.kernel_key is not None:
        return model.kernel_key
    return None


def core():
    return _core
