"""Deterministic random substreams and batched Monte Carlo reduction.

Work is always cut into the same ``N_BATCHES`` batches no matter how many
workers run them.  Batch ``i`` draws from its own generator seeded by
``SeedSequence(seed, spawn_key=(i,))`` and batch results are reduced in
index order, so the worker count only changes wall time, never the value.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, Tuple

import numpy as np

N_BATCHES = 64


def default_workers() -> int:
    return max(1, os.cpu_count() or 1)


def substream(seed: int, index: int) -> np.random.Generator:
    """Generator for substream ``index`` of ``seed``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.PCG64(ss))


def batch_sizes(n: int, n_batches: int = N_BATCHES) -> List[int]:
    """Split ``n`` into ``n_batches`` nearly equal parts, larger ones first."""
    if n < n_batches:
        raise ValueError(f"need at least {n_batches} samples, got {n}")
    q, r = divmod(int(n), n_batches)
    return [q + 1 if i < r else q for i in range(n_batches)]


def run_batches(
    task: Callable[[np.random.Generator, int], np.ndarray],
    n: int,
    seed: int,
    workers: int = 1,
    n_batches: int = N_BATCHES,
) -> List[np.ndarray]:
    """Run ``task(rng, size)`` on every batch; results come back in batch order.

    ``task`` returns an array of per-batch sums (any fixed shape).
    """
    sizes = batch_sizes(n, n_batches)

    def one(i):
        return np.asarray(task(substream(seed, i), sizes[i]), dtype=float)

    workers = max(1, int(workers))
    if workers == 1:
        return [one(i) for i in range(n_batches)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, range(n_batches)))


def mean_and_stderr(batch_sums: Sequence[np.ndarray], sizes: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    """Overall mean and batch-means standard error from per-batch sums."""
    sums = np.stack([np.asarray(s, dtype=float) for s in batch_sums])
    sizes = np.asarray(sizes, dtype=float).reshape((-1,) + (1,) * (sums.ndim - 1))
    total = math.fsum(sizes.reshape(-1))
    mean = _ordered_sum(sums) / total
    batch_means = sums / sizes
    k = sums.shape[0]
    # weighted batch-means variance of the overall mean
    w = sizes / total
    dev = batch_means - mean
    var = _ordered_sum(w * w * dev * dev) * k / (k - 1)
    return mean, np.sqrt(var)


def _ordered_sum(a: np.ndarray) -> np.ndarray:
    # pairwise tree over the batch axis; fixed shape gives a fixed order
    a = np.asarray(a, dtype=float)
    while a.shape[0] > 1:
        if a.shape[0] % 2:
            a = np.concatenate([a, np.zeros((1,) + a.shape[1:])])
        a = a[0::2] + a[1::2]
    return a[0]


def derive_seed(seed: int, *keys: int) -> int:
    """A 63-bit seed for a named sub-computation of ``seed``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1))
