"""Hot kernels, dispatched to numba or numpy per the active backend."""
from __future__ import annotations

import numpy as np

from .._backend import get_backend
from . import _vec

BOUNDARY_MODES = {"none": 0, "half_step": 1, "bridge": 2}


def _loops():
    from . import _jit as mod

    return mod


def rank_gf_mod(N: int, p: int) -> np.ndarray:
    """Coefficients of the two-variable rank generating function mod ``p``.

    Returns ``F`` with ``F[d, N + m]`` = coefficient of ``q^d z^m`` for
    ``d <= N``.
    """
    if get_backend() == "numba":
        return _loops().rank_gf_mod(N, p)
    return _vec.rank_gf_mod(N, p)


def crank_gf_mod(N: int, p: int) -> np.ndarray:
    """Same layout as :func:`rank_gf_mod` for the crank product."""
    if get_backend() == "numba":
        return _loops().crank_gf_mod(N, p)
    return _vec.crank_gf_mod(N, p)


def fristedt_chunk(n, q, count, seed_seq, kdirect, pdc, max_rej, lam, keep_mult):
    """One chunk of accepted Fristedt samples; ``seed_seq`` is a SeedSequence."""
    lam = np.ascontiguousarray(lam, dtype=np.float64)
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    if get_backend() == "numba":
        return _loops().fristedt_chunk(n, q, count, rng, kdirect, pdc, max_rej, lam, keep_mult)
    return _vec.fristedt_chunk(n, q, count, rng, kdirect, pdc, max_rej, lam, keep_mult)


def ball_exit_chunk(count, h, mode, seed_seq):
    """First exit times of 3-D Brownian motion from the unit ball."""
    if mode not in BOUNDARY_MODES:
        raise ValueError(f"boundary mode must be one of {tuple(BOUNDARY_MODES)}, got {mode!r}")
    code = BOUNDARY_MODES[mode]
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    if get_backend() == "numba":
        return _loops().ball_exit_chunk(count, h, code, rng)
    return _vec.ball_exit_chunk(count, h, code, rng)
