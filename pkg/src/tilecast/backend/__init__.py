"""Kernel backend selection: compiled extension with pure-Python fallback.

The compiled module (_core, built from _core.pyx) and the reference module
(_pycore) implement the same functions with bit-identical results; the
compiled one exists purely for speed. Selection order: the TILECAST_BACKEND
environment variable ("compiled", "python", or "auto"), else compiled when
importable, else python.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pycore

_active: ModuleType | None = None


def _load_compiled() -> ModuleType | None:
    try:
        from . import _core  # type: ignore[attr-defined]
        return _core
    except ImportError:
        return None


def set_backend(name: str) -> ModuleType:
    """Select the kernel backend by name: "auto", "compiled", or "python"."""
    global _active
    if name in ("auto", ""):
        _active = _load_compiled() or _pycore
    elif name == "compiled":
        compiled = _load_compiled()
        if compiled is None:
            raise RuntimeError(
                "compiled backend requested but the extension is not built; "
                "reinstall without TILECAST_PURE_PYTHON or use 'python'")
        _active = compiled
    elif name == "python":
        _active = _pycore
    else:
        raise ValueError(f"unknown backend {name!r}; use 'auto', 'compiled', or 'python'")
    return _active


def active() -> ModuleType:
    """The currently selected backend module (selecting on first use)."""
    global _active
    if _active is None:
        set_backend(os.environ.get("TILECAST_BACKEND", "auto"))
    assert _active is not None
    return _active


def backend_name() -> str:
    return active().BACKEND_NAME
