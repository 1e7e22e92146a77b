"""Kernel backend selection: the compiled extension if importable, else pure Python."""
from __future__ import annotations

from types import ModuleType

from . import _pykernels

try:
    from . import _ckernels
except ImportError:
    _ckernels = None

_active: ModuleType = _ckernels if _ckernels is not None else _pykernels


def available() -> list[str]:
    names = ["python"]
    if _ckernels is not None:
        names.insert(0, "cython")
    return names


def name() -> str:
    return "cython" if _active is _ckernels else "python"


def get(which: str | None = None) -> ModuleType:
    """Return the active kernel module, or a specific one by name."""
    if which is None:
        return _active
    if which == "python":
        return _pykernels
    if which == "cython":
        if _ckernels is None:
            raise ImportError("compiled kernels are not built; run `pip install -e .`")
        return _ckernels
    raise ValueError(f"unknown backend {which!r}")


def use(which: str) -> None:
    """Switch the process-wide backend (``"cython"`` or ``"python"``)."""
    global _active
    _active = get(which)
