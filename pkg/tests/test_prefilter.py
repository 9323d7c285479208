import math

import numpy as np
import pytest

from conftest import random_dataset
from svdd_sampling import (
    Dataset,
    IndexSet,
    KernelSpec,
    empirical_density,
    gram_matrix,
    prefilter,
)


def test_p_out_zero_filters_nothing():
    rng = np.random.default_rng(0)
    g = gram_matrix(random_dataset(rng, 12, 2), KernelSpec(0.5))
    pf = prefilter(g, 0.0)
    assert pf.inliers == IndexSet.full(12)
    assert len(pf.outliers) == 0
    original = empirical_density(g, IndexSet.full(12)).values
    assert np.array_equal(pf.adjusted_density.values, original)
    assert pf.realized_outlier_ratio == 0.0


def test_four_point_hand_enumeration():
    # collinear points with four distinct densities; p_out = 0.5 filters
    # exactly the floor(0.5 * 4) = 2 least dense points; the threshold sits
    # on the third-smallest density
    points = [0.0, 1.0, 2.5, 9.0]
    g = gram_matrix(Dataset([[p] for p in points]), KernelSpec(1.0))
    dens = [sum(math.exp(-((a - b) ** 2)) for b in points) for a in points]
    order = np.argsort(dens)
    theta_expected = dens[order[2]]

    pf = prefilter(g, 0.5)
    assert pf.theta_pre.theta == pytest.approx(theta_expected, rel=1e-12)
    assert sorted(pf.outliers) == sorted(int(o) + 1 for o in order[:2])
    assert len(pf.inliers) == 2
    assert pf.realized_outlier_ratio == 0.5
    # adjusted densities drop by exactly the outlier kernel columns
    for i in range(4):
        expected = dens[i] - sum(g.values[i, int(o)] for o in order[:2])
        assert pf.adjusted_density.values[i] == pytest.approx(expected, rel=1e-12)


def test_identical_points_all_stay_inliers():
    g = gram_matrix(Dataset(np.ones((6, 2))), KernelSpec(2.0))
    for p_out in (0.0, 0.4, 0.9):
        pf = prefilter(g, p_out)
        assert len(pf.outliers) == 0
        assert len(pf.inliers) == 6


def test_p_out_domain():
    rng = np.random.default_rng(1)
    g = gram_matrix(random_dataset(rng, 5, 1), KernelSpec(1.0))
    with pytest.raises(ValueError):
        prefilter(g, 1.0)
    with pytest.raises(ValueError):
        prefilter(g, -0.01)


def test_outlier_count_bound():
    rng = np.random.default_rng(2)
    for _ in range(25):
        n = int(rng.integers(3, 60))
        g = gram_matrix(random_dataset(rng, n, 2), KernelSpec(0.7))
        p_out = float(rng.uniform(0, 0.999))
        pf = prefilter(g, p_out)
        cap = int(np.floor(p_out * n))
        assert len(pf.outliers) <= cap
        dens = empirical_density(g, IndexSet.full(n)).values
        if len(np.unique(dens)) == n:  # distinct densities: the target is met exactly
            assert len(pf.outliers) == cap
        assert len(pf.inliers) >= 1
        # split property: every inlier at or above the threshold, outliers below
        assert np.all(dens[pf.inliers.zero_based] >= pf.theta_pre.theta)
        if len(pf.outliers):
            assert np.all(dens[pf.outliers.zero_based] < pf.theta_pre.theta)


def test_adjusted_density_additivity():
    rng = np.random.default_rng(3)
    for _ in range(15):
        n = int(rng.integers(4, 40))
        g = gram_matrix(random_dataset(rng, n, 3), KernelSpec(0.4))
        pf = prefilter(g, float(rng.uniform(0, 0.5)))
        recomputed = empirical_density(g, pf.inliers).values
        assert np.allclose(pf.adjusted_density.values, recomputed, atol=1e-9)


def test_prefilter_idempotent_on_inlier_subset():
    rng = np.random.default_rng(4)
    data = random_dataset(rng, 30, 2)
    g = gram_matrix(data, KernelSpec(0.6))
    pf = prefilter(g, 0.2)
    inlier_data = data.restrict(pf.inliers)
    g2 = gram_matrix(inlier_data, KernelSpec(0.6))
    pf2 = prefilter(g2, 0.0)
    assert pf2.inliers == IndexSet.full(inlier_data.n)
    assert len(pf2.outliers) == 0
    assert np.array_equal(
        pf2.adjusted_density.values, empirical_density(g2, pf2.inliers).values
    )
