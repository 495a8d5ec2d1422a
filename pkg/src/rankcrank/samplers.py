"""Uniform random partitions of large ``n`` and samplers for the limit laws.

Partitions come from Fristedt's conditioning device: independent
multiplicities ``a_k ~ Geometric(q^k)`` are proposed and a proposal is kept
only when ``sum k a_k == n``, which makes every kept partition exactly
uniform. The default ``pdc`` method is the probabilistic divide-and-conquer
form of the same rejection: ``a_1`` is not drawn but set to the remainder
``r = n - sum_{k>=2} k a_k``, and the proposal is kept with probability
``P(a_1 = r) / P(a_1 = 0) = q^r``. Kept samples have the same conditional law
with far fewer proposals.

Streams: chunk ``i`` of sampler ``s`` draws from
``SeedSequence(seed, spawn_key=(s, i))``, so output depends only on the seed
and the backend, never on the worker count.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from ._backend import get_backend
from .errors import DomainError, ResourceError
from .partitions import Partition
from .stats import bootstrap_ci, distance_correlation, pearson

STREAM_FRISTEDT = 1
STREAM_GUMBEL = 2
STREAM_RANK_LIMIT = 3
STREAM_LOGISTIC = 4

CHUNK = 256
SAMPLE_CSV_HEADER = ("n", "seed", "sample_index", "rank", "crank", "lambda1", "ell")

# Poisson intensities below this are dropped from the tail embedding; the
# total neglected mass per proposal is below 1e-18.
_TAIL_CUTOFF = 1e-20


def default_q(n: int) -> float:
    return math.exp(-math.pi / math.sqrt(6 * n))


@dataclass(frozen=True)
class SamplerConfig:
    """Parameters of a Fristedt sampling run.

    ``max_rejections`` bounds the rejected proposals allowed before any single
    accepted sample (``None`` is unlimited).
    """

    n: int
    seed: int = 0
    q_param: float | None = None
    max_rejections: int | None = None
    method: str = "pdc"

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError("n must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if self.q_param is None:
            object.__setattr__(self, "q_param", default_q(self.n))
        if not 0.0 < self.q_param < 1.0:
            raise DomainError("q_param must lie in (0, 1)")
        if self.method not in ("pdc", "plain"):
            raise ValueError("method must be 'pdc' or 'plain'")
        if self.max_rejections is not None and self.max_rejections < 0:
            raise DomainError("max_rejections must be >= 0")


@dataclass(frozen=True)
class SampleBatch:
    """Per-sample statistics of accepted partitions."""

    config: SamplerConfig
    rank: np.ndarray
    crank: np.ndarray
    lambda1: np.ndarray
    ell: np.ndarray
    proposals: np.ndarray
    backend: str = "numpy"
    multiplicities: np.ndarray | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return int(self.rank.size)

    @property
    def rejection_count(self) -> int:
        return int(self.proposals.sum() - self.proposals.size)

    @property
    def acceptance_rate(self) -> float:
        return self.proposals.size / float(self.proposals.sum())

    def partitions(self) -> list[Partition]:
        if self.multiplicities is None:
            raise ValueError("batch was drawn without keep_partitions=True")
        return [Partition.from_multiplicities(row) for row in self.multiplicities]

    def to_csv(self, dest) -> None:
        own = isinstance(dest, (str, os.PathLike))
        fh = open(dest, "w", newline="") if own else dest
        try:
            fh.write(",".join(SAMPLE_CSV_HEADER) + "\n")
            n, seed = self.config.n, self.config.seed
            rows = np.column_stack((np.arange(len(self)), self.rank, self.crank, self.lambda1, self.ell))
            fh.writelines(f"{n},{seed},{i},{r},{c},{a},{b}\n" for i, r, c, a, b in rows.tolist())
        finally:
            if own:
                fh.close()


def merge_batches(batches: Sequence[SampleBatch]) -> SampleBatch:
    """Concatenate batches drawn under one configuration."""
    if not batches:
        raise ValueError("nothing to merge")
    cfg = batches[0].config
    if any(b.config.n != cfg.n for b in batches):
        raise ValueError("batches must share n")
    mults = [b.multiplicities for b in batches]
    return SampleBatch(
        cfg,
        *(np.concatenate([getattr(b, f) for b in batches]) for f in ("rank", "crank", "lambda1", "ell", "proposals")),
        backend=batches[0].backend,
        multiplicities=None if any(m is None for m in mults) else np.concatenate(mults),
    )


def _plan(cfg: SamplerConfig) -> tuple[int, np.ndarray]:
    n, q = cfg.n, cfg.q_param
    logq = math.log(q)
    kdirect = min(n, max(1, math.ceil(2.0 / -logq)))
    L = n - kdirect
    lam = []
    if L > 0:
        j = 1
        while True:
            log_lam = (
                (kdirect + 1) * j * logq
                + math.log(-math.expm1(L * j * logq))
                - math.log(j)
                - math.log(-math.expm1(j * logq))
            )
            if log_lam < math.log(_TAIL_CUTOFF):
                break
            lam.append(math.exp(log_lam))
            j += 1
    return kdirect, np.array(lam, dtype=np.float64)


def _chunk_sizes(count: int) -> list[int]:
    full, rest = divmod(count, CHUNK)
    return [CHUNK] * full + ([rest] if rest else [])


def _run_chunks(fn, sizes: list[int], workers: int):
    if workers <= 1 or len(sizes) == 1:
        return [fn(i, s) for i, s in enumerate(sizes)]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(lambda a: fn(*a), enumerate(sizes)))


def fristedt_sample(config: SamplerConfig, count: int, workers: int = 1, keep_partitions: bool = False) -> SampleBatch:
    """``count`` exactly uniform partitions of ``config.n``, summarized.

    Raises :class:`ResourceError` when a sample needs more than
    ``config.max_rejections`` rejected proposals.
    """
    if count < 1:
        raise DomainError("count must be >= 1")
    kdirect, lam = _plan(config)
    max_rej = -1 if config.max_rejections is None else config.max_rejections

    def one(i: int, size: int):
        ss = np.random.SeedSequence(config.seed, spawn_key=(STREAM_FRISTEDT, i))
        stats, mult, status = kernels.fristedt_chunk(
            config.n, config.q_param, size, ss, kdirect, config.method == "pdc", max_rej, lam, keep_partitions
        )
        if status:
            raise ResourceError(
                f"rejection budget {config.max_rejections} exhausted in chunk {i} "
                f"(n={config.n}, q={config.q_param:.6g}, method={config.method})"
            )
        return stats, mult

    parts = _run_chunks(one, _chunk_sizes(count), workers)
    stats = np.concatenate([p[0] for p in parts])
    mult = np.concatenate([p[1] for p in parts]) if keep_partitions else None
    return SampleBatch(
        config,
        rank=stats[:, 0].copy(),
        crank=stats[:, 1].copy(),
        lambda1=stats[:, 2].copy(),
        ell=stats[:, 3].copy(),
        proposals=stats[:, 4].copy(),
        backend=get_backend(),
        multiplicities=mult,
    )


# ---------------------------------------------------------------------------
# limit-law samplers


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream,))))


def gumbel_sample(seed: int, count: int) -> np.ndarray:
    """I.i.d. standard Gumbel draws ``-log(-log U)``."""
    if count < 1:
        raise DomainError("count must be >= 1")
    u = _rng(seed, STREAM_GUMBEL).random(count)
    # U = 0 has probability 2**-53 per draw; map it to the open interval
    u = np.where(u == 0.0, np.finfo(float).tiny, u)
    return -np.log(-np.log(u))


def rank_limit_sample(seed: int, count: int) -> np.ndarray:
    """Draws of ``(W1 - W2) / pi`` with ``W1, W2`` independent standard Gumbel."""
    if count < 1:
        raise DomainError("count must be >= 1")
    rng = _rng(seed, STREAM_RANK_LIMIT)
    u = rng.random((2, count))
    u = np.where(u == 0.0, np.finfo(float).tiny, u)
    w = -np.log(-np.log(u))
    return (w[0] - w[1]) / math.pi


def logistic_sample(seed: int, count: int) -> np.ndarray:
    """Inverse-CDF draws from the logistic rank limit."""
    from .laws import logistic_quantile

    u = _rng(seed, STREAM_LOGISTIC).random(count)
    u = np.where(u == 0.0, np.finfo(float).tiny, u)
    return logistic_quantile(u)


# ---------------------------------------------------------------------------
# diagnostics on sampled partitions


def erdos_lehner_scale(n: int) -> float:
    return math.sqrt(6 * n) / math.pi


def erdos_lehner_rescale(batch: SampleBatch, which: str = "lambda1") -> np.ndarray:
    """``(x - a log a) / a`` with ``a = sqrt(6n)/pi``, for ``x`` = largest part or length."""
    if len(batch) == 0:
        raise DomainError("empty batch")
    if which not in ("lambda1", "ell"):
        raise ValueError("which must be 'lambda1' or 'ell'")
    a = erdos_lehner_scale(batch.config.n)
    x = getattr(batch, which).astype(np.float64)
    return (x - a * math.log(a)) / a


def rescaled_rank(batch: SampleBatch, statistic: str = "rank") -> np.ndarray:
    return getattr(batch, statistic).astype(np.float64) / math.sqrt(6 * batch.config.n)


def independence_diagnostic(
    batch_or_pair, n_boot: int = 1000, level: float = 0.95, seed: int = 0, dcor_max: int = 2000
) -> dict:
    """Correlation between rescaled largest part and rescaled length.

    Accepts a :class:`SampleBatch` or an explicit ``(x, y)`` pair of arrays.
    Reports the Pearson correlation with a percentile-bootstrap interval and
    a distance-correlation estimate on at most ``dcor_max`` points.
    """
    if isinstance(batch_or_pair, SampleBatch):
        x = erdos_lehner_rescale(batch_or_pair, "lambda1")
        y = erdos_lehner_rescale(batch_or_pair, "ell")
    else:
        x, y = (np.asarray(v, dtype=float) for v in batch_or_pair)
    if x.size < 1000:
        raise DomainError("independence diagnostic needs at least 1000 samples")
    r = pearson(x, y)
    lo, hi = bootstrap_ci(x, y, pearson, n_boot=n_boot, level=level, seed=seed)
    m = min(x.size, dcor_max)
    return {
        "correlation": r,
        "ci_low": lo,
        "ci_high": hi,
        "ci_level": level,
        "ci_covers_zero": bool(lo <= 0.0 <= hi),
        "distance_correlation": distance_correlation(x[:m], y[:m]),
        "size": int(x.size),
    }
