"""Seeded Gaussian-mixture data with injected uniform outliers.

Inliers come from an equal-weight mixture of isotropic Gaussians whose means
are drawn uniformly in [0, 10]^m and whose per-component standard deviation
is drawn uniformly in [0.5, 1.5]. Outliers are drawn uniformly over the
inliers' bounding box inflated by 3 units per side, rejecting draws that land
within (sqrt(m) + 3) component standard deviations of any mean: an inlier
sits at radius ~sqrt(m)*std (radial spread ~std/sqrt(2)) from its mean, so
accepted outliers lie clearly off the inlier shell and the labels carry no
noise. Everything is a pure function of the seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import IN, OUT, Dataset, LabelVector

BOX_LOW, BOX_HIGH = 0.0, 10.0
STD_LOW, STD_HIGH = 0.5, 1.5
OUTLIER_BOX_MARGIN = 3.0


@dataclass(frozen=True)
class MixtureConfig:
    n: int
    m: int
    components: int
    outlier_ratio: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not self.n >= self.components >= 1:
            raise ValueError(f"need n >= components >= 1, got n={self.n}, components={self.components}")
        if self.m < 1:
            raise ValueError(f"need m >= 1, got {self.m}")
        if not 0.0 <= self.outlier_ratio < 1.0:
            raise ValueError(f"outlier_ratio must lie in [0, 1), got {self.outlier_ratio}")


def generate_mixture(config: MixtureConfig) -> tuple[Dataset, LabelVector]:
    """Draw a labeled mixture dataset; exactly floor(outlier_ratio * n) outliers."""
    rng = np.random.default_rng(config.seed)
    n_out = int(np.floor(config.outlier_ratio * config.n))
    n_in = config.n - n_out

    means = rng.uniform(BOX_LOW, BOX_HIGH, size=(config.components, config.m))
    stds = rng.uniform(STD_LOW, STD_HIGH, size=config.components)
    assignment = rng.integers(0, config.components, size=n_in)
    inliers = means[assignment] + rng.standard_normal((n_in, config.m)) * stds[assignment, None]

    rows = [inliers]
    if n_out:
        lo = inliers.min(axis=0) - OUTLIER_BOX_MARGIN
        hi = inliers.max(axis=0) + OUTLIER_BOX_MARGIN
        clearance = (np.sqrt(config.m) + 3.0) * stds
        rows.append(_draw_outliers(rng, n_out, lo, hi, means, clearance))
    X = np.vstack(rows)
    labels = LabelVector(np.asarray([IN] * n_in + [OUT] * n_out, dtype=object))
    return Dataset(X), labels


def _draw_outliers(rng, n_out, lo, hi, means, clearance):
    """Uniform draws over [lo, hi], kept only clear of every component core."""
    out = []
    best, best_score = None, -np.inf
    attempts = 0
    while len(out) < n_out:
        x = rng.uniform(lo, hi)
        score = float(np.min(np.linalg.norm(x - means, axis=1) / clearance))
        if score >= 1.0:
            out.append(x)
        elif score > best_score:
            best, best_score = x, score
        attempts += 1
        if attempts >= 1000 * n_out:  # cores cover the box; take the clearest draws
            out.append(best)
            best, best_score = None, -np.inf
            attempts = 0
    return np.asarray(out)
