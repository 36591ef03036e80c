"""Counter-based random streams and a chunked Monte Carlo mean estimator.

Every chunk of samples draws from its own Philox stream keyed by
``(seed, stream_index)``.  Chunk sizes are fixed by ``n_samples`` and
``chunk_size`` alone and partial sums are merged in chunk order, so an
estimate is bit-for-bit the same for any number of worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = ["McEstimate", "mc_stream", "mc_mean", "DEFAULT_CHUNK"]

DEFAULT_CHUNK = 1 << 16


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    n_samples: int
    seed: int

    def within(self, target: float, n_sigma: float = 3.0) -> bool:
        return abs(self.mean - target) <= n_sigma * self.stderr

    @property
    def rel_stderr(self) -> float:
        return self.stderr / abs(self.mean) if self.mean else math.inf


def mc_stream(seed: int, stream_index: int) -> np.random.Generator:
    """Independent generator for one (seed, stream) pair."""
    if seed < 0 or stream_index < 0:
        raise ValueError("seed and stream_index must be non-negative")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream_index),))
    return np.random.Generator(np.random.Philox(ss))


def _chunk_sizes(n_samples: int, chunk_size: int) -> list[int]:
    full, rest = divmod(n_samples, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def mc_mean(
    draw: Callable[[np.random.Generator, int], np.ndarray],
    n_samples: int,
    seed: int,
    *,
    stream_offset: int = 0,
    chunk_size: int = DEFAULT_CHUNK,
    workers: int = 1,
) -> McEstimate:
    """Estimate E[w] where ``draw(rng, n)`` returns ``n`` real sample weights.

    Chunk ``i`` uses stream ``stream_offset + i``.  A non-finite weight is a
    bug in the integrand, not a numerical event, and raises.
    """
    if n_samples < 2:
        raise ValueError("need at least 2 samples for a standard error")
    sizes = _chunk_sizes(int(n_samples), int(chunk_size))

    def run(i: int):
        rng = mc_stream(seed, stream_offset + i)
        w = np.asarray(draw(rng, sizes[i]), dtype=float)
        if w.shape != (sizes[i],):
            raise ValueError(f"draw returned shape {w.shape}, expected ({sizes[i]},)")
        if not np.all(np.isfinite(w)):
            bad = int(np.flatnonzero(~np.isfinite(w))[0])
            raise FloatingPointError(f"non-finite integrand sample (stream {stream_offset + i}, index {bad})")
        # per-chunk shift keeps the variance accumulation well conditioned
        mean = float(np.mean(w))
        return mean, float(np.sum((w - mean) ** 2)), sizes[i]

    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(i) for i in range(len(sizes))]

    # Chan et al. pairwise merge, in chunk order
    n_tot, mean_tot, m2_tot = 0, 0.0, 0.0
    for mean, m2, n in parts:
        delta = mean - mean_tot
        n_new = n_tot + n
        mean_tot += delta * n / n_new
        m2_tot += m2 + delta * delta * n_tot * n / n_new
        n_tot = n_new
    var = m2_tot / (n_tot - 1)
    return McEstimate(mean=mean_tot, stderr=math.sqrt(var / n_tot), n_samples=n_tot, seed=int(seed))
