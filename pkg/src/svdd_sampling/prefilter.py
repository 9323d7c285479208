"""Density-based pre-filtering: split observations into inliers and outliers.

Pre-filtering replaces the SVDD trade-off parameter C with an explicit
expected outlier fraction p_out: the density threshold is the p_out quantile
of the empirical density, everything below it is declared an outlier, and the
outliers' kernel columns are subtracted from the density vector so downstream
sampling sees the inlier-only density. SVDD afterwards always trains hard
margin (C = 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import IndexSet
from .density import DensityVector, LevelThreshold, density_quantile_threshold, empirical_density
from .kernel import GramMatrix


@dataclass(frozen=True, eq=False)
class PrefilterResult:
    """Inlier/outlier split plus the outlier-adjusted density vector.

    `adjusted_density` sums over the inlier set only but is evaluated at all
    N observations. Density ties at the threshold are kept as inliers, so the
    realized outlier fraction can fall below the requested p_out.
    """

    inliers: IndexSet
    outliers: IndexSet
    theta_pre: LevelThreshold
    adjusted_density: DensityVector
    p_out: float

    @property
    def n(self) -> int:
        return self.adjusted_density.n

    @property
    def realized_outlier_ratio(self) -> float:
        return len(self.outliers) / self.n


def prefilter(gram: GramMatrix, p_out: float) -> PrefilterResult:
    """Split observations at the p_out density quantile.

    Inliers are all observations with density >= theta_pre (ties classified
    in), so the inlier set is never empty for p_out < 1.
    """
    if not 0.0 <= p_out < 1.0:
        raise ValueError(f"p_out must lie in [0, 1), got {p_out}")
    d_full = empirical_density(gram, IndexSet.full(gram.n))
    theta_pre = density_quantile_threshold(d_full, p_out)
    inlier_mask = d_full.values >= theta_pre.theta
    inliers = IndexSet(np.flatnonzero(inlier_mask) + 1)
    outliers = inliers.complement(gram.n)

    adjusted = d_full.values.copy()
    if len(outliers):
        adjusted -= gram.values[:, outliers.zero_based].sum(axis=1)
    return PrefilterResult(
        inliers=inliers,
        outliers=outliers,
        theta_pre=theta_pre,
        adjusted_density=DensityVector(adjusted, inliers),
        p_out=p_out,
    )
