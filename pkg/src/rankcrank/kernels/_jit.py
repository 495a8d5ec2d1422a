"""numba loop kernels. Imported only when the numba backend is active."""
import math

import numpy as np
from numba import njit

BOUNDARY_NONE = 0
BOUNDARY_HALF_STEP = 1
BOUNDARY_BRIDGE = 2


# ---------------------------------------------------------------------------
# bivariate q-series, coefficients modulo p
# F[d, N + m] holds the coefficient of q^d z^m; all arithmetic is additive so
# p < 2**62 keeps every intermediate sum inside int64.


@njit(cache=True, nogil=True)
def _divide(F, j, dmax, dz, N, p):
    # F <- F / (1 - z^dz q^j) on degrees 0..dmax, in place (ascending d)
    for d in range(j, dmax + 1):
        src = d - j
        for i in range(N - src, N + src + 1):
            v = F[src, i]
            if v != 0:
                t = F[d, i + dz] + v
                if t >= p:
                    t -= p
                F[d, i + dz] = t


@njit(cache=True, nogil=True)
def rank_gf_mod(N, p):
    F = np.zeros((N + 1, 2 * N + 1), np.int64)
    K = 0
    while (K + 1) * (K + 1) <= N:
        K += 1
    F[0, N] = 1
    # nested Horner form of sum_k q^{k^2} / ((zq;q)_k (q/z;q)_k)
    for k in range(K - 1, -1, -1):
        dprev = N - (k + 1) * (k + 1)
        _divide(F, k + 1, dprev, 1, N, p)
        _divide(F, k + 1, dprev, -1, N, p)
        s = 2 * k + 1
        for d in range(dprev, -1, -1):
            for i in range(2 * N + 1):
                F[d + s, i] = F[d, i]
        for d in range(s):
            for i in range(2 * N + 1):
                F[d, i] = 0
        F[0, N] = 1
    return F


@njit(cache=True, nogil=True)
def crank_gf_mod(N, p):
    F = np.zeros((N + 1, 2 * N + 1), np.int64)
    F[0, N] = 1
    for j in range(1, N + 1):
        _divide(F, j, N, 1, N, p)
        _divide(F, j, N, -1, N, p)
    # multiply by (q;q)_inf = sum_k (-1)^k q^{k(3k -+ 1)/2}, descending d in place
    for d in range(N, 0, -1):
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > d:
                break
            neg = k % 2 == 1
            for g in (g1, g1 + k):
                if g > d:
                    break
                src = d - g
                for i in range(N - src, N + src + 1):
                    v = F[src, i]
                    if v == 0:
                        continue
                    if neg:
                        t = F[d, i] - v
                        if t < 0:
                            t += p
                    else:
                        t = F[d, i] + v
                        if t >= p:
                            t -= p
                    F[d, i] = t
            k += 1
    return F


# ---------------------------------------------------------------------------
# Fristedt / Boltzmann proposals


@njit(cache=True, nogil=True)
def fristedt_chunk(n, q, count, rng, kdirect, pdc, max_rej, lam, keep_mult):
    """Draw ``count`` exact-size partitions of ``n``.

    Parts ``k <= kdirect`` get geometric multiplicities from exponentials; larger
    parts come from the Poisson embedding of the geometric law, with
    intensity ``lam[j-1]`` for points carrying ``j`` copies of one part.
    Returns (stats, mult, status); status 0 ok, 1 rejection budget hit.
    """
    logq = math.log(q)
    stats = np.zeros((count, 5), np.int64)
    mult = np.zeros((count if keep_mult else 0, n + 1), np.int64)
    a = np.zeros(kdirect + 1, np.int64)
    L = n - kdirect
    cap = 256
    tk = np.empty(cap, np.int64)
    tc = np.empty(cap, np.int64)
    kstart = 2 if pdc else 1
    for s in range(count):
        tries = 0
        while True:
            tries += 1
            if max_rej >= 0 and tries > max_rej + 1:
                return stats, mult, 1
            total = 0
            over = False
            for k in range(kstart, kdirect + 1):
                # P(a_k >= m) = P(E >= -m k log q) = q^(k m)
                ak = int(math.floor(rng.standard_exponential() / (k * -logq)))
                a[k] = ak
                total += k * ak
                if total > n:
                    over = True
                    break
            if over:
                continue
            nt = 0
            if L > 0:
                for jj in range(lam.shape[0]):
                    j = jj + 1
                    npts = rng.poisson(lam[jj])
                    if npts == 0:
                        continue
                    c = -math.expm1(j * L * logq)
                    for _ in range(npts):
                        u = rng.random()
                        i = int(math.floor(math.log1p(-u * c) / (j * logq)))
                        if i > L - 1:
                            i = L - 1
                        k = kdirect + 1 + i
                        total += k * j
                        if nt == cap:
                            cap *= 2
                            tk2 = np.empty(cap, np.int64)
                            tc2 = np.empty(cap, np.int64)
                            tk2[:nt] = tk[:nt]
                            tc2[:nt] = tc[:nt]
                            tk = tk2
                            tc = tc2
                        tk[nt] = k
                        tc[nt] = j
                        nt += 1
                    if total > n:
                        over = True
                        break
            if over:
                continue
            if pdc:
                r = n - total
                if r < 0:
                    continue
                if rng.random() >= math.exp(r * logq):
                    continue
                a[1] = r
            elif total != n:
                continue
            break
        # accepted: statistics from the multiplicities
        ones = a[1] if kdirect >= 1 else 0
        ell = 0
        lam1 = 0
        larger = 0
        for k in range(1, kdirect + 1):
            if a[k] > 0:
                ell += a[k]
                lam1 = k
                if k > ones:
                    larger += a[k]
        for t in range(nt):
            ell += tc[t]
            if tk[t] > lam1:
                lam1 = tk[t]
            if tk[t] > ones:
                larger += tc[t]
        stats[s, 0] = lam1 - ell
        stats[s, 1] = lam1 if ones == 0 else larger - ones
        stats[s, 2] = lam1
        stats[s, 3] = ell
        stats[s, 4] = tries
        if keep_mult:
            for k in range(1, kdirect + 1):
                mult[s, k] = a[k]
            for t in range(nt):
                mult[s, tk[t]] += tc[t]
    return stats, mult, 0


# ---------------------------------------------------------------------------
# 3-D Brownian exit from the unit ball


@njit(cache=True, nogil=True)
def ball_exit_chunk(count, h, mode, rng):
    sq = math.sqrt(h)
    out = np.empty(count)
    for s in range(count):
        x = 0.0
        y = 0.0
        z = 0.0
        t = 0.0
        r_prev = 0.0
        while True:
            x += sq * rng.standard_normal()
            y += sq * rng.standard_normal()
            z += sq * rng.standard_normal()
            t += h
            r2 = x * x + y * y + z * z
            if r2 >= 1.0:
                out[s] = t - 0.5 * h if mode != BOUNDARY_NONE else t
                break
            if mode == BOUNDARY_BRIDGE:
                r = math.sqrt(r2)
                p_cross = math.exp(-2.0 * (1.0 - r_prev) * (1.0 - r) / h)
                if rng.random() < p_cross:
                    out[s] = t - 0.5 * h
                    break
                r_prev = r
    return out
