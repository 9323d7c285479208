import math

import numpy as np
import pytest

from conftest import projected_gradient_ball, random_dataset
from svdd_sampling import (
    IN,
    OUT,
    Dataset,
    DimensionMismatchError,
    KernelSpec,
    MixtureConfig,
    bandwidth_scott,
    boundary_points,
    empirical_density,
    gaussian_kernel,
    generate_mixture,
    gram_matrix,
    IndexSet,
    model_from_json,
    model_to_json,
    predict,
    predict_batch,
    train_svdd,
)


# ---------------------------------------------------------------------------
# analytic cases


def test_single_point_degenerate_ball():
    model = train_svdd(Dataset([[1.0, 2.0]]), KernelSpec(1.5))
    assert np.array_equal(model.alpha, [1.0])
    assert model.radius_sq == 0.0
    p = predict(model, [1.0, 2.0])
    assert p.label == IN and p.squared_distance == 0.0


def test_two_point_analytic_solution():
    x, y = [0.0, 0.0], [1.2, -0.7]
    for gamma in (0.3, 1.0, 4.0):
        model = train_svdd(Dataset([x, y]), KernelSpec(gamma))
        kappa = gaussian_kernel(x, y, gamma)
        assert model.alpha == pytest.approx([0.5, 0.5], abs=1e-9)
        assert model.radius_sq == pytest.approx((1.0 - kappa) / 2.0, abs=1e-9)


def test_two_identical_points():
    model = train_svdd(Dataset([[3.0], [3.0]]), KernelSpec(2.0))
    assert model.radius_sq == pytest.approx(0.0, abs=1e-12)
    labels, _ = predict_batch(model, np.array([[3.0]]))
    assert list(labels) == [IN]


def test_matches_projected_gradient_oracle():
    rng = np.random.default_rng(60)
    for trial in range(5):
        data = random_dataset(rng, 8, 2)
        kernel = KernelSpec(bandwidth_scott(data))
        K = gram_matrix(data, kernel).values
        model = train_svdd(data, kernel)
        oracle_alpha = projected_gradient_ball(K)
        ours = float(model.alpha @ K @ model.alpha)
        theirs = float(oracle_alpha @ K @ oracle_alpha)
        assert ours <= theirs + 1e-5
        assert abs(ours - theirs) < 1e-5


# ---------------------------------------------------------------------------
# KKT / dual feasibility


def test_dual_feasibility():
    rng = np.random.default_rng(61)
    for n in (3, 10, 40):
        data = random_dataset(rng, n, 3)
        model = train_svdd(data, KernelSpec(bandwidth_scott(data)))
        assert float(model.alpha.sum()) == pytest.approx(1.0, abs=1e-9)
        assert model.alpha.min() >= -1e-9 and model.alpha.max() <= 1.0 + 1e-9
        assert model.converged
        assert len(model.support_vectors) >= 1


def test_boundary_support_vectors_sit_on_sphere():
    rng = np.random.default_rng(62)
    data = random_dataset(rng, 30, 2)
    model = train_svdd(data, KernelSpec(bandwidth_scott(data)))
    unconstrained = (model.alpha > 1e-8) & (model.alpha < 1.0 - 1e-8)
    assert unconstrained.any()
    for i in np.flatnonzero(unconstrained):
        p = predict(model, data.X[i])
        assert p.squared_distance == pytest.approx(model.radius_sq, abs=1e-6)


def test_hard_margin_encloses_training_data():
    rng = np.random.default_rng(63)
    for n in (5, 25, 80):
        data = random_dataset(rng, n, 2)
        model = train_svdd(data, KernelSpec(bandwidth_scott(data)))
        labels, _ = predict_batch(model, data)
        assert all(v == IN for v in labels)
        sq = np.array([predict(model, row).margin for row in data.X])
        assert sq.min() >= -1e-6


def test_soft_margin_dual_constraints():
    rng = np.random.default_rng(64)
    data = random_dataset(rng, 12, 2)
    model = train_svdd(data, KernelSpec(1.0), C=0.25)
    assert float(model.alpha.sum()) == pytest.approx(1.0, abs=1e-9)
    assert model.alpha.max() <= 0.25 + 1e-9
    with pytest.raises(ValueError):
        train_svdd(data, KernelSpec(1.0), C=0.05)  # C*N < 1 infeasible
    with pytest.raises(ValueError):
        train_svdd(data, KernelSpec(1.0), C=1.5)


# ---------------------------------------------------------------------------
# prediction


def test_far_query_is_out():
    rng = np.random.default_rng(65)
    data = random_dataset(rng, 10, 2)
    gamma = bandwidth_scott(data)
    model = train_svdd(data, KernelSpec(gamma))
    far = data.X.mean(axis=0) + 100.0 / math.sqrt(gamma)
    p = predict(model, far)
    assert p.label == OUT
    assert p.squared_distance == pytest.approx(1.0 + model.center_norm_sq, abs=1e-9)
    assert p.squared_distance > model.radius_sq


def test_prediction_dimension_mismatch():
    model = train_svdd(Dataset([[0.0, 0.0]]), KernelSpec(1.0))
    with pytest.raises(DimensionMismatchError):
        predict(model, [1.0, 2.0, 3.0])
    with pytest.raises(DimensionMismatchError):
        predict_batch(model, np.zeros((2, 3)))


def test_batch_empty_and_consistency():
    rng = np.random.default_rng(66)
    data = random_dataset(rng, 12, 2)
    model = train_svdd(data, KernelSpec(bandwidth_scott(data)))
    labels, t_inf = predict_batch(model, np.empty((0, 2)))
    assert labels.n == 0 and t_inf == 0.0
    query = data.X[0] + 0.37
    batch = np.tile(query, (5, 1))
    batch_labels, t_inf = predict_batch(model, batch)
    single = predict(model, query)
    assert all(v == single.label for v in batch_labels)
    assert t_inf >= 0.0


def test_label_rule_matches_margin():
    rng = np.random.default_rng(67)
    data = random_dataset(rng, 15, 2)
    model = train_svdd(data, KernelSpec(bandwidth_scott(data)))
    for row in rng.normal(5.0, 4.0, size=(20, 2)):
        p = predict(model, row)
        assert p.margin == pytest.approx(model.radius_sq - p.squared_distance, rel=1e-12)
        assert p.label == (IN if p.margin >= -1e-9 else OUT)


# ---------------------------------------------------------------------------
# support vectors and serialization


def test_inference_uses_only_support_vectors():
    rng = np.random.default_rng(68)
    data = random_dataset(rng, 50, 2)
    model = train_svdd(data, KernelSpec(bandwidth_scott(data)))
    assert len(model.support_vectors) < data.n  # some alphas vanish
    reloaded = model_from_json(model_to_json(model))
    assert reloaded.n_train == data.n
    queries = rng.normal(5.0, 3.0, size=(40, 2))
    full = np.array([predict(model, q).squared_distance for q in queries])
    trimmed = np.array([predict(reloaded, q).squared_distance for q in queries])
    assert np.allclose(full, trimmed, atol=1e-12)


def test_serialization_roundtrip_is_exact():
    rng = np.random.default_rng(69)
    data = random_dataset(rng, 20, 3)
    model = train_svdd(data, KernelSpec(bandwidth_scott(data)))
    reloaded = model_from_json(model_to_json(model))
    # floats round-trip exactly; a second hop is a fixed point
    assert model_to_json(model_from_json(model_to_json(reloaded))) == model_to_json(reloaded)
    assert reloaded.kernel.gamma == model.kernel.gamma
    assert reloaded.radius_sq == model.radius_sq
    assert reloaded.center_norm_sq == model.center_norm_sq
    assert np.array_equal(reloaded.alpha, model.sv_alpha)
    queries = rng.normal(size=(10, 3))
    for q in queries:
        assert predict(reloaded, q).squared_distance == predict(model, q).squared_distance


def test_model_json_rejects_garbage():
    with pytest.raises(ValueError):
        model_from_json('{"format": "something-else"}')


# ---------------------------------------------------------------------------
# support vectors tend to sit in the low-density rim


@pytest.mark.xfail(
    strict=True,
    reason="idealized claim: an RBF Gram matrix has full rank, so the feature-space "
    "ball touches many points and carries small positive weights well above any "
    "density band; only the bulk of the alpha mass concentrates on the rim "
    "(see test_alpha_mass_concentrates_on_low_density_rim)",
)
def test_every_unconstrained_sv_in_generous_boundary_band():
    for seed in range(5):
        data, _ = generate_mixture(MixtureConfig(n=120, m=2, components=2, seed=seed))
        kernel = KernelSpec(bandwidth_scott(data))
        model = train_svdd(data, kernel)
        g = gram_matrix(data, kernel)
        dens = empirical_density(g, IndexSet.full(data.n))
        vals = dens.over_source()
        band = boundary_points(dens, delta=0.25 * float(vals.max() - vals.min()))
        unconstrained = np.flatnonzero((model.alpha > 1e-8) & (model.alpha < 1.0 - 1e-8))
        rim = set(band.indices.zero_based)
        for i in unconstrained:
            assert int(i) in rim


def test_alpha_mass_concentrates_on_low_density_rim():
    # the testable form of the boundary/support-vector tendency: the dual
    # weight loads the low-density side of the data hard (weighted mean
    # density well below the plain mean, weighted density rank in the lowest
    # third)
    for seed in range(5):
        data, _ = generate_mixture(MixtureConfig(n=120, m=2, components=2, seed=seed))
        kernel = KernelSpec(bandwidth_scott(data))
        model = train_svdd(data, kernel)
        g = gram_matrix(data, kernel)
        dens = empirical_density(g, IndexSet.full(data.n)).values
        weighted_mean = float(model.alpha @ dens)
        assert weighted_mean < 0.75 * float(dens.mean())
        ranks = np.argsort(np.argsort(dens)) / (data.n - 1)
        assert float(model.alpha @ ranks) < 0.35
