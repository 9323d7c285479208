"""Empirical kernel density, level-set classification, and boundary points.

The empirical density of observation i over a source set S is the plain sum
of kernel values d_i = sum_{j in S} K[i, j]; it is left unnormalized. With a
unit-diagonal kernel, 1 <= d_i <= |S| whenever i itself belongs to S.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .data import IN, OUT, IndexSet, LabelVector
from .kernel import GramMatrix


@dataclass(frozen=True, eq=False)
class DensityVector:
    """Per-observation density values, evaluated at all N points.

    `source` names the index set the density sums over (the full data, the
    inliers, or a sample); values exist for every observation regardless.
    """

    values: np.ndarray
    source: IndexSet

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 1:
            raise ValueError("density values must form a flat vector")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        self.source.validate_max(len(vals))

    @property
    def n(self) -> int:
        return len(self.values)

    def over_source(self) -> np.ndarray:
        """Density values restricted to the source set's own members."""
        return self.values[self.source.zero_based]


@dataclass(frozen=True)
class LevelThreshold:
    """A density level; observations at or above it form the super-level set."""

    theta: float

    def __post_init__(self):
        if not np.isfinite(self.theta):
            raise ValueError(f"threshold must be finite, got {self.theta}")


@dataclass(frozen=True, eq=False)
class BoundarySet:
    """Indices whose density sits within `delta` of the source minimum."""

    indices: IndexSet
    delta: float

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError(f"delta must be positive, got {self.delta}")


def empirical_density(gram: GramMatrix, over: IndexSet) -> DensityVector:
    """Sum the Gram columns of `over` for every observation.

    Summation runs in a fixed (ascending-column, pairwise) order, so results
    are reproducible bit for bit.
    """
    if len(over) == 0:
        raise ValueError("cannot take a density over an empty source set")
    over.validate_max(gram.n)
    values = gram.values[:, over.zero_based].sum(axis=1)
    return DensityVector(values, over)


def _theta_value(theta: Union[LevelThreshold, float]) -> float:
    return theta.theta if isinstance(theta, LevelThreshold) else float(theta)


def level_set_classify(d: DensityVector, theta: Union[LevelThreshold, float]) -> LabelVector:
    """Label each observation `in` iff its density reaches the threshold."""
    t = _theta_value(theta)
    return LabelVector(np.where(d.values >= t, IN, OUT).astype(object))


def density_quantile_threshold(d: DensityVector, p_out: float) -> LevelThreshold:
    """Threshold at the p_out quantile of the density values.

    Chosen so that classifying with ">= theta" marks exactly
    floor(p_out * N) observations as outliers when densities are distinct:
    theta is the ascending-sorted density at 1-based position
    min(N, floor(p_out * N) + 1). Ties at theta stay inliers, so the realized
    outlier count can fall below the target under ties. p_out = 0 puts the
    threshold at the minimum (no filtering); p_out = 1 keeps the maximizer.
    """
    if not 0.0 <= p_out <= 1.0:
        raise ValueError(f"p_out must lie in [0, 1], got {p_out}")
    if d.n == 0:
        raise ValueError("empty density vector")
    position = min(d.n, int(np.floor(p_out * d.n)) + 1)
    return LevelThreshold(float(np.sort(d.values)[position - 1]))


def default_boundary_delta(d: DensityVector) -> float:
    """Test convention for the boundary band width: 5% of the density range.

    Floored at a tiny positive value so uniform densities still yield a valid
    band (which then contains every source point).
    """
    vals = d.over_source()
    return max(0.05 * float(vals.max() - vals.min()), 1e-9)


def boundary_points(d: DensityVector, delta: Optional[float] = None) -> BoundarySet:
    """Source-set members whose density lies in [d_min, d_min + delta).

    d_min is the minimum density over the source set's own members; with the
    default band (5% of the source density range) this extracts the points
    sitting on the outer rim of the source distribution.
    """
    if d.n == 0:
        raise ValueError("empty density vector")
    if delta is None:
        delta = default_boundary_delta(d)
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    src = d.source.zero_based
    vals = d.values[src]
    d_min = float(vals.min())
    members = src[vals < d_min + delta]
    return BoundarySet(IndexSet(members + 1), delta)
