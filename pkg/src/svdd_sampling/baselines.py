"""Random sampling baselines.

Rand_r draws a uniform subset of the pre-filtered inliers at a fixed sample
ratio r. Draws use numpy's PCG64 generator, so a seed pins the sample across
platforms and sessions.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .data import IndexSet
from .prefilter import PrefilterResult
from .rapid import SampleSelection


@dataclass(frozen=True)
class RandomSampleConfig:
    """Sample ratio r in (0, 1] and the generator seed."""

    ratio: float
    seed: int

    def __post_init__(self):
        if not 0.0 < self.ratio <= 1.0:
            raise ValueError(f"ratio must lie in (0, 1], got {self.ratio}")


def sample_size_for_ratio(n_inliers: int, ratio: float) -> int:
    """Round half up, clamped so the sample is never empty."""
    return max(1, int(np.floor(ratio * n_inliers + 0.5)))


def random_sample(
    inliers: IndexSet,
    config: RandomSampleConfig,
    prefilter: Optional[PrefilterResult] = None,
) -> SampleSelection:
    """Uniform sample without replacement from the inlier set."""
    if len(inliers) == 0:
        raise ValueError("cannot sample from an empty inlier set")
    t0 = time.perf_counter()
    size = sample_size_for_ratio(len(inliers), config.ratio)
    rng = np.random.default_rng(config.seed)
    chosen = rng.choice(inliers.indices, size=size, replace=False)
    return SampleSelection(
        sample=IndexSet(chosen),
        prefilter=prefilter,
        method="rand",
        seed=config.seed,
        t_samp=time.perf_counter() - t0,
    )
