"""Kernel backend selection.

The hot float kernels exist twice: a numba @njit build and a pure-numpy
build. The environment variable BANACHGEO_BACKEND picks one:

    auto   use numba when importable (default)
    numba  require numba, fail loudly if missing
    numpy  force the pure-numpy fallback

`set_backend` overrides the environment at runtime (used by tests and the
benchmark).
"""

import os
import warnings

_VALID = ("auto", "numba", "numpy")

_backend = os.environ.get("BANACHGEO_BACKEND", "auto").strip().lower()
if _backend not in _VALID:
    warnings.warn(
        f"BANACHGEO_BACKEND={_backend!r} not recognized, falling back to 'auto'"
    )
    _backend = "auto"

_numba_ok = None


def _numba_importable() -> bool:
    global _numba_ok
    if _numba_ok is None:
        try:
            import numba  # noqa: F401

            _numba_ok = True
        except ImportError:
            _numba_ok = False
    return _numba_ok


def set_backend(name: str) -> None:
    global _backend
    if name not in _VALID:
        raise ValueError(f"backend must be one of {_VALID}, got {name!r}")
    _backend = name


def active_backend() -> str:
    """Resolved backend name: 'numba' or 'numpy'."""
    if _backend == "numpy":
        return "numpy"
    if _backend == "numba":
        if not _numba_importable():
            raise ImportError("BANACHGEO_BACKEND=numba but numba is not importable")
        return "numba"
    return "numba" if _numba_importable() else "numpy"


def using_numba() -> bool:
    return active_backend() == "numba"
