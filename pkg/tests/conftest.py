"""Shared helpers: random instance generators and independent oracles."""

from __future__ import annotations

import numpy as np

from svdd_sampling import Dataset, GramMatrix, IndexSet, KernelSpec, gram_matrix


def random_dataset(rng: np.random.Generator, n: int, m: int, spread: float = 3.0) -> Dataset:
    """Blob-ish data without symmetry, so density ties have probability zero."""
    centers = rng.uniform(0.0, 10.0, size=(max(1, n // 4), m))
    pick = rng.integers(0, len(centers), size=n)
    return Dataset(centers[pick] + rng.normal(0.0, spread / 3.0, size=(n, m)))


def random_gram(rng: np.random.Generator, n: int, m: int, gamma: float) -> GramMatrix:
    return gram_matrix(random_dataset(rng, n, m), KernelSpec(gamma))


def scalar_density(K: np.ndarray, over: list[int], i: int) -> float:
    """Literal per-entry density sum (independent of the vectorized path)."""
    return sum(K[i, j] for j in over)


def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort-based)."""
    u = np.sort(v)[::-1]
    cumulative = np.cumsum(u) - 1.0
    rho = np.nonzero(u - cumulative / np.arange(1, len(v) + 1) > 0)[0][-1]
    theta = cumulative[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def projected_gradient_ball(K: np.ndarray, iters: int = 30000) -> np.ndarray:
    """Independent solver for min a'Ka on the simplex (projected gradient)."""
    n = K.shape[0]
    alpha = np.full(n, 1.0 / n)
    lipschitz = float(np.linalg.eigvalsh(K).max())
    step = 1.0 / (2.0 * lipschitz)
    for _ in range(iters):
        alpha = project_to_simplex(alpha - step * 2.0 * (K @ alpha))
    return alpha


def mirror_greedy_removal(K: np.ndarray, inliers: list[int]) -> tuple[list[int], list[tuple], bool]:
    """From-scratch re-implementation of the removal loop (no incremental
    updates): every iteration recomputes all densities by plain Python sums.
    Returns the final 0-based sample, (removed, theta_min, violator) steps,
    and whether any decision rested on a sub-1e-9 gap (where two float paths
    may legitimately disagree).
    """
    sample = sorted(inliers)
    steps = []
    ambiguous = False
    for _ in range(len(inliers) - 1):
        dens = [scalar_density(K, sample, i) for i in range(K.shape[0])]
        r = max(sample, key=lambda i: (dens[i], -i))  # lowest index wins ties
        runner_up = max((dens[i] for i in sample if i != r), default=None)
        if runner_up is not None and dens[r] - runner_up < 1e-9:
            ambiguous = True
        reduced = sorted(set(sample) - {r})
        d_check = [scalar_density(K, reduced, i) for i in range(K.shape[0])]
        theta_min = min(d_check[i] for i in reduced)
        violator = next((i for i in sorted(inliers) if d_check[i] < theta_min), None)
        if abs(min(d_check[i] for i in inliers) - theta_min) < 1e-12:
            ambiguous = True
        steps.append((r, theta_min, violator))
        if violator is not None:
            return sample, steps, ambiguous
        sample = reduced
    return sample, steps, ambiguous


def index_set(*indices_1based: int) -> IndexSet:
    return IndexSet(np.asarray(indices_1based, dtype=np.int64))
