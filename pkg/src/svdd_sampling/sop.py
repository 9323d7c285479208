"""The sample optimization problem: feasibility checking and an exact solver.

A sample S of the inlier set I is feasible when no inlier's density over S
falls below the minimum density of the selected observations themselves,

    d_S(x_i) >= theta_min = min_{j in S} d_S(x_j)   for all i in I.

The objective is the uniformity gap Delta_fit = theta_max - theta_min, with
theta_max / theta_min taken over the selected observations. The exact solver
enumerates all nonempty subsets and is intended for tiny instances only; it
serves as the correctness oracle for the greedy sampler.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from .data import IndexSet
from .kernel import GramMatrix

#: Largest inlier count the exhaustive solver accepts (2^|I| subsets).
EXACT_SOLVER_CAP = 15


@dataclass(frozen=True, eq=False)
class SopSolution:
    """An optimal sample with its density statistics.

    `argmin_witness` is the selected observation attaining theta_min (the
    w_j = 1 witness of the constraint formulation).
    """

    sample: IndexSet
    theta_min: float
    theta_max: float
    objective: float
    argmin_witness: int


def sample_theta_range(gram: GramMatrix, sample: IndexSet) -> tuple[float, float]:
    """(theta_min, theta_max) of the sample's self-density, recomputed from scratch."""
    if len(sample) == 0:
        raise ValueError("empty sample")
    sample.validate_max(gram.n)
    cols = gram.values[np.ix_(sample.zero_based, sample.zero_based)]
    d_s = cols.sum(axis=1)
    return float(d_s.min()), float(d_s.max())


def delta_fit(gram: GramMatrix, sample: IndexSet) -> float:
    """Uniformity gap theta_max - theta_min of the sample's self-density."""
    lo, hi = sample_theta_range(gram, sample)
    return hi - lo


def check_feasible(
    gram: GramMatrix,
    inliers: IndexSet,
    sample: IndexSet,
    tolerance: float = 0.0,
) -> tuple[bool, Optional[str]]:
    """Check d_S(x_i) >= theta_min - tolerance for every inlier i.

    Returns (True, None) when feasible, else (False, description) naming the
    first violating index in ascending order.
    """
    if len(sample) == 0:
        raise ValueError("empty sample")
    if not sample.issubset(inliers):
        raise ValueError("sample must be a subset of the inlier set")
    inliers.validate_max(gram.n)

    inl = inliers.zero_based
    d_s = gram.values[np.ix_(inl, sample.zero_based)].sum(axis=1)
    in_sample = np.isin(inliers.indices, sample.indices)
    theta_min = float(d_s[in_sample].min())

    below = d_s < theta_min - tolerance
    if not below.any():
        return True, None
    first = int(inliers.indices[np.argmax(below)])
    return False, (
        f"observation {first}: density {d_s[np.argmax(below)]:.9g} "
        f"falls below theta_min {theta_min:.9g} (tolerance {tolerance:g})"
    )


def solve_sop_exact(gram: GramMatrix, inliers: IndexSet) -> SopSolution:
    """Exhaustively minimize Delta_fit over all feasible nonempty subsets.

    Subsets are visited in increasing cardinality, lexicographic within each
    cardinality, and a candidate replaces the incumbent only on a strictly
    smaller objective — so ties resolve to the smallest sample, then the
    lexicographically smallest index set. S = I is always feasible, so a
    solution exists.
    """
    n = len(inliers)
    if n == 0:
        raise ValueError("empty inlier set")
    if n > EXACT_SOLVER_CAP:
        raise ValueError(f"|inliers|={n} exceeds the exhaustive solver cap of {EXACT_SOLVER_CAP}")
    inliers.validate_max(gram.n)

    K_sub = gram.values[np.ix_(inliers.zero_based, inliers.zero_based)]
    best: Optional[tuple[float, tuple[int, ...], float, float, int]] = None
    for size in range(1, n + 1):
        for positions in combinations(range(n), size):
            pos = list(positions)
            d_s = K_sub[:, pos].sum(axis=1)
            theta_min = float(d_s[pos].min())
            if float(d_s.min()) < theta_min:
                continue
            theta_max = float(d_s[pos].max())
            objective = theta_max - theta_min
            if best is None or objective < best[0]:
                witness = pos[int(np.argmin(d_s[pos]))]
                best = (objective, positions, theta_min, theta_max, witness)
        if best is not None and best[0] == 0.0:
            break

    objective, positions, theta_min, theta_max, witness = best
    global_idx = inliers.indices[list(positions)]
    return SopSolution(
        sample=IndexSet(global_idx),
        theta_min=theta_min,
        theta_max=theta_max,
        objective=objective,
        argmin_witness=int(inliers.indices[witness]),
    )
