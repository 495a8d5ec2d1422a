"""Kernel backend selection.

``RANKCRANK_BACKEND=numba`` (default when numba imports) runs the ``@njit``
loop kernels; ``RANKCRANK_BACKEND=numpy`` runs the vectorized fallbacks.
Both produce identical integer tables; the samplers draw from different
generators per backend, so seeded output is reproducible per backend only.
"""
from __future__ import annotations

import contextlib
import os
from importlib.util import find_spec
from typing import Iterator

ENV_VAR = "RANKCRANK_BACKEND"
BACKENDS = ("numba", "numpy")

HAVE_NUMBA = find_spec("numba") is not None


def _initial() -> str:
    name = os.environ.get(ENV_VAR, "").strip().lower()
    if not name:
        return "numba" if HAVE_NUMBA else "numpy"
    if name not in BACKENDS:
        raise ValueError(f"{ENV_VAR} must be one of {BACKENDS}, got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise ImportError(f"{ENV_VAR}=numba but numba is not installed")
    return name


_current = _initial()


def get_backend() -> str:
    return _current


def set_backend(name: str) -> None:
    global _current
    if name not in BACKENDS:
        raise ValueError(f"backend must be one of {BACKENDS}, got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise ImportError("numba is not installed")
    _current = name


@contextlib.contextmanager
def using_backend(name: str) -> Iterator[None]:
    prev = _current
    set_backend(name)
    try:
        yield
    finally:
        set_backend(prev)
