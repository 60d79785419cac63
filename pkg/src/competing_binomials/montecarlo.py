"""Seeded Monte Carlo checks.

Trials are split into fixed-size chunks and chunk ``k`` draws from a Philox
generator keyed by ``seed`` with its counter starting at ``k << 192``.  The
streams therefore depend only on ``(seed, chunk)``, and integer success
counts are summed in chunk order, so the estimate is bit-identical for any
number of worker threads.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .exact import DomainError, DuelParams

__all__ = ["SimConfig", "Estimate", "mc_duel", "mc_double_exp", "THREADS_ENV"]

#: Environment variable overriding the default worker count.
THREADS_ENV = "COMPETING_BINOMIALS_THREADS"

_DRAWS_PER_CHUNK = 1 << 21


@dataclass(frozen=True)
class SimConfig:
    trials: int
    seed: int = 0
    rng: str = "philox"
    workers: int | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.rng != "philox":
            raise ValueError(f"unsupported generator {self.rng!r}")

    def n_workers(self) -> int:
        if self.workers is not None:
            return max(1, self.workers)
        return max(1, int(os.environ.get(THREADS_ENV, "1")))


@dataclass(frozen=True)
class Estimate:
    p_hat: float
    std_error: float
    trials: int
    successes: int

    @classmethod
    def from_counts(cls, successes: int, trials: int) -> "Estimate":
        p = successes / trials
        return cls(p, math.sqrt(p * (1.0 - p) / trials), trials, successes)

    @property
    def lower(self) -> float:
        return self.p_hat - 4.0 * self.std_error

    @property
    def upper(self) -> float:
        return self.p_hat + 4.0 * self.std_error

    def sigma_distance(self, p) -> float:
        """``|p_hat - p|`` in units of the binomial standard error at ``p``."""
        p = float(p)
        se = math.sqrt(p * (1.0 - p) / self.trials)
        diff = abs(self.p_hat - p)
        if se == 0.0:
            return 0.0 if diff == 0.0 else math.inf
        return diff / se

    def to_dict(self) -> dict:
        return {
            "p_hat": repr(self.p_hat),
            "std_error": repr(self.std_error),
            "trials": self.trials,
            "successes": self.successes,
            "lower_4sigma": repr(self.lower),
            "upper_4sigma": repr(self.upper),
        }


def _generator(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed, counter=chunk << 192))


def _run(cfg: SimConfig, width: int, count_chunk) -> Estimate:
    per_chunk = max(1, _DRAWS_PER_CHUNK // max(width, 1))
    sizes = []
    left = cfg.trials
    while left > 0:
        sizes.append(min(per_chunk, left))
        left -= sizes[-1]

    def job(k):
        return count_chunk(_generator(cfg.seed, k), sizes[k])

    workers = cfg.n_workers()
    if workers == 1 or len(sizes) == 1:
        counts = [job(k) for k in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(job, range(len(sizes))))
    return Estimate.from_counts(int(sum(counts)), cfg.trials)


def mc_duel(params: DuelParams, cfg: SimConfig) -> Estimate:
    """Frequency of ``S_{n+r} >= S'_n + d`` from simulated coin tosses."""
    a = float(params.alpha)
    long_, short = params.n + params.r, params.n

    def count(gen, m):
        heads = (gen.random((m, long_)) < a).sum(axis=1)
        other = (gen.random((m, short)) < a).sum(axis=1) if short else 0
        return int(np.count_nonzero(heads >= other + params.d))

    return _run(cfg, long_ + short, count)


def mc_double_exp(n: int, alpha, a: float, cfg: SimConfig) -> Estimate:
    """Frequency of ``Z_1 + ... + Z_n > 0`` for centred double-sided exponentials.

    ``Z = (X Y - alpha/(1-alpha) (1-X) Y) / a`` with ``X ~ Bernoulli(alpha)``
    and ``Y ~ Exp(1)`` (inverse CDF).  The sign of the sum equals that of
    ``sum X Y (1-alpha) - (1-X) Y alpha``, which is what is tested: the scale
    ``a`` cannot change any indicator.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    if not a > 0:
        raise DomainError(f"scale a must be positive, got {a}")
    al = float(alpha)
    if not 0.0 < al < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    n = int(n)

    def count(gen, m):
        x = gen.random((m, n)) < al
        y = -np.log1p(-gen.random((m, n)))
        total = np.where(x, y * (1.0 - al), -y * al).sum(axis=1)
        return int(np.count_nonzero(total > 0.0))

    return _run(cfg, 2 * n, count)
