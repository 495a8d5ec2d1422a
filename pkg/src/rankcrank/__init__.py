"""Exact and sampled rank/crank statistics of integer partitions and their limit laws."""
from ._backend import get_backend, set_backend, using_backend
from .errors import DomainError, ResourceError
from .exact import CountTable, crank_distribution, distribution, moment_ratio, moments, rank_distribution
from .laws import GUMBEL, RANK_LIMIT, LimitLaw, absolute_moment, bernoulli, limit_even_moment
from .partitions import Partition, conjugate, crank, enumerate_partitions, partition_count, rank
from .samplers import SamplerConfig, fristedt_sample, gumbel_sample, logistic_sample, rank_limit_sample

__version__ = "0.1.0"

__all__ = [
    "CountTable",
    "DomainError",
    "GUMBEL",
    "LimitLaw",
    "Partition",
    "RANK_LIMIT",
    "ResourceError",
    "SamplerConfig",
    "absolute_moment",
    "bernoulli",
    "conjugate",
    "crank",
    "crank_distribution",
    "distribution",
    "enumerate_partitions",
    "fristedt_sample",
    "get_backend",
    "gumbel_sample",
    "limit_even_moment",
    "logistic_sample",
    "moment_ratio",
    "moments",
    "partition_count",
    "rank",
    "rank_distribution",
    "rank_limit_sample",
    "set_backend",
    "using_backend",
]
