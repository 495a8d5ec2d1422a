"""Vectorized numpy fallbacks for the loop kernels in ``_jit``."""
import math

import numpy as np

BOUNDARY_NONE = 0
BOUNDARY_HALF_STEP = 1
BOUNDARY_BRIDGE = 2


def _reduce(blk, p):
    blk -= p * (blk >= p)


def _divide(F, j, dmax, dz, p):
    # rows [d, d+j) only read rows [d-j, d), which are already final
    d = j
    while d <= dmax:
        e = min(d + j, dmax + 1)
        blk = F[d:e]
        if dz == 1:
            blk[:, 1:] += F[d - j : e - j, :-1]
        else:
            blk[:, :-1] += F[d - j : e - j, 1:]
        _reduce(blk, p)
        d = e


def rank_gf_mod(N, p):
    F = np.zeros((N + 1, 2 * N + 1), np.int64)
    K = math.isqrt(N)
    F[0, N] = 1
    for k in range(K - 1, -1, -1):
        dprev = N - (k + 1) ** 2
        _divide(F, k + 1, dprev, 1, p)
        _divide(F, k + 1, dprev, -1, p)
        s = 2 * k + 1
        F[s : dprev + s + 1] = F[: dprev + 1].copy()
        F[:s] = 0
        F[0, N] = 1
    return F


def crank_gf_mod(N, p):
    F = np.zeros((N + 1, 2 * N + 1), np.int64)
    F[0, N] = 1
    for j in range(1, N + 1):
        _divide(F, j, N, 1, p)
        _divide(F, j, N, -1, p)
    H = F.copy()
    k = 1
    while k * (3 * k - 1) // 2 <= N:
        for g in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            if g > N:
                continue
            if k % 2:
                H[g:] -= F[:-g]
                H[g:] += p * (H[g:] < 0)
            else:
                H[g:] += F[:-g]
                _reduce(H[g:], p)
        k += 1
    return H


def fristedt_chunk(n, q, count, rng, kdirect, pdc, max_rej, lam, keep_mult, batch=256):
    """Same contract as the numba kernel, proposals drawn ``batch`` at a time."""
    logq = math.log(q)
    L = n - kdirect
    kstart = 2 if pdc else 1
    ks = np.arange(kstart, kdirect + 1)
    stats = np.zeros((count, 5), np.int64)
    mult = np.zeros((count if keep_mult else 0, n + 1), np.int64)
    got = 0
    since = 0
    while got < count:
        a = np.floor(rng.standard_exponential((batch, ks.size)) / (ks * -logq)).astype(np.int64)
        total = a @ ks if ks.size else np.zeros(batch, np.int64)
        if L > 0 and lam.size:
            npts = rng.poisson(np.broadcast_to(lam, (batch, lam.size)))
            owner = np.repeat(np.tile(np.arange(batch), lam.size), npts.T.ravel())
            jvals = np.repeat(np.repeat(np.arange(1, lam.size + 1), batch), npts.T.ravel())
            c = -np.expm1(jvals * L * logq)
            i = np.floor(np.log1p(-rng.random(owner.size) * c) / (jvals * logq)).astype(np.int64)
            tail_k = kdirect + 1 + np.minimum(i, L - 1)
            total = total + np.bincount(owner, weights=tail_k * jvals, minlength=batch).astype(np.int64)
        else:
            owner = jvals = tail_k = np.zeros(0, np.int64)
        if pdc:
            r = n - total
            acc_u = rng.random(batch)
            ok = (r >= 0) & (acc_u < np.exp(np.maximum(r, 0) * logq))
        else:
            r = None
            ok = total == n
        for b in np.flatnonzero(ok):
            since_b = since + b + 1
            if max_rej >= 0 and since_b > max_rej + 1:
                return stats, mult, 1
            m = np.zeros(n + 1, np.int64) if keep_mult else None
            direct = np.zeros(kdirect + 1, np.int64)
            direct[kstart:] = a[b]
            if pdc:
                direct[1] = r[b]
            sel = owner == b
            tk, tc = tail_k[sel], jvals[sel]
            ones = direct[1]
            ell = direct.sum() + tc.sum()
            nz = np.flatnonzero(direct)
            lam1 = max(nz[-1] if nz.size else 0, tk.max() if tk.size else 0)
            larger = direct[ones + 1 :].sum() + tc[tk > ones].sum()
            stats[got] = (lam1 - ell, lam1 if ones == 0 else larger - ones, lam1, ell, since_b)
            if keep_mult:
                m[: kdirect + 1] = direct
                np.add.at(m, tk, tc)
                mult[got] = m
            got += 1
            since = -(b + 1)
            if got == count:
                return stats, mult, 0
        since += batch
        if max_rej >= 0 and since > max_rej + 1:
            return stats, mult, 1
    return stats, mult, 0


def ball_exit_chunk(count, h, mode, rng):
    sq = math.sqrt(h)
    out = np.empty(count)
    idx = np.arange(count)
    pos = np.zeros((count, 3))
    r_prev = np.zeros(count)
    t = 0.0
    while idx.size:
        pos += sq * rng.standard_normal(pos.shape)
        t += h
        r2 = np.einsum("ij,ij->i", pos, pos)
        hit = r2 >= 1.0
        if mode == BOUNDARY_BRIDGE:
            r = np.sqrt(r2)
            p_cross = np.exp(-2.0 * (1.0 - r_prev) * (1.0 - r) / h)
            hit |= rng.random(idx.size) < p_cross
            r_prev = r
        if hit.any():
            out[idx[hit]] = t - 0.5 * h if mode != BOUNDARY_NONE else t
            keep = ~hit
            idx, pos = idx[keep], pos[keep]
            if mode == BOUNDARY_BRIDGE:
                r_prev = r_prev[keep]
    return out
