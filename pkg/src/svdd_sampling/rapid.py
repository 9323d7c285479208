"""Greedy density-based sample selection.

Starting from the full inlier set (a feasible sample), the algorithm
repeatedly removes the observation with the highest current density, updating
all densities by subtracting the removed column, and terminates as soon as
the reduced sample would be infeasible, i.e. some inlier's density would fall
below the minimum density of the remaining selected observations:

    for iter in 1 .. |I|-1:
        r         = argmax_{i in S} d_i            (lowest index on ties)
        d         = d - K[:, r]                    (densities over S \\ {r})
        theta_min = min_{i in S \\ {r}} d_i
        if any i in I has d_i < theta_min:         (S \\ {r} is infeasible)
            return S                               (r still included)
        S         = S \\ {r}

Each iteration is one pass over the data, so sampling is O(N^2) overall,
dominated by the pairwise kernel evaluations of the Gram matrix.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .data import IndexSet
from .kernel import GramMatrix
from .prefilter import PrefilterResult, prefilter

#: Iteration interval at which densities are recomputed from scratch to
#: bound floating-point drift of the incremental updates.
RECOMPUTE_INTERVAL = 256


@dataclass(frozen=True)
class TraceStep:
    """One loop iteration: the removal candidate, the minimum density of the
    reduced sample (candidate excluded), and the violating inlier if one
    triggered termination (in which case the candidate stayed in the sample)."""

    removed: int
    theta_min: float
    violator: Optional[int] = None


@dataclass(frozen=True)
class RapidTrace:
    steps: tuple[TraceStep, ...]

    @property
    def terminated_by_violation(self) -> bool:
        return bool(self.steps) and self.steps[-1].violator is not None

    def removals(self) -> int:
        """Number of observations actually removed from the sample."""
        if self.terminated_by_violation:
            return len(self.steps) - 1
        return len(self.steps)

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True, eq=False)
class SampleSelection:
    """A selected subset of the inliers with provenance and timing."""

    sample: IndexSet
    prefilter: Optional[PrefilterResult]
    method: str
    seed: Optional[int]
    t_samp: float

    def __post_init__(self):
        if len(self.sample) == 0:
            raise ValueError("a sample selection cannot be empty")
        if self.prefilter is not None and not self.sample.issubset(self.prefilter.inliers):
            raise ValueError("sample must be a subset of the pre-filter inliers")

    @property
    def size(self) -> int:
        return len(self.sample)


def rapid_sample_traced(gram: GramMatrix, p_out: float) -> tuple[SampleSelection, RapidTrace]:
    """Run the greedy sampler and record every iteration.

    Pre-filtering and the removal loop are deterministic: ties in the argmax
    and the min resolve to the lowest index, and all comparisons are exact
    floating-point comparisons on the incrementally maintained densities
    (refreshed from scratch every RECOMPUTE_INTERVAL iterations).
    """
    t0 = time.perf_counter()
    pf = prefilter(gram, p_out)
    K = gram.values
    n = gram.n

    in_sample = np.zeros(n, dtype=bool)
    in_sample[pf.inliers.zero_based] = True
    inlier_mask = in_sample.copy()
    d = pf.adjusted_density.values.copy()

    steps: list[TraceStep] = []
    for it in range(len(pf.inliers) - 1):
        if it > 0 and it % RECOMPUTE_INTERVAL == 0:
            d = K @ in_sample.astype(np.float64)
        r = int(np.argmax(np.where(in_sample, d, -np.inf)))
        d -= K[:, r]
        in_sample[r] = False
        theta_min = float(np.where(in_sample, d, np.inf).min())
        below = inlier_mask & (d < theta_min)
        if below.any():
            in_sample[r] = True
            steps.append(TraceStep(r + 1, theta_min, int(np.argmax(below)) + 1))
            break
        steps.append(TraceStep(r + 1, theta_min, None))

    selection = SampleSelection(
        sample=IndexSet(np.flatnonzero(in_sample) + 1),
        prefilter=pf,
        method="rapid",
        seed=None,
        t_samp=time.perf_counter() - t0,
    )
    return selection, RapidTrace(tuple(steps))


def rapid_sample(gram: GramMatrix, p_out: float) -> SampleSelection:
    """Greedy density-based sample of the pre-filtered inliers."""
    selection, _ = rapid_sample_traced(gram, p_out)
    return selection
