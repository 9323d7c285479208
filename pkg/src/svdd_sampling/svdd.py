"""Hard-margin SVDD: dual training, decision function, model serialization.

Training solves the minimum-enclosing-ball dual

    minimize   a' K a        subject to  sum(a) = 1,  0 <= a_i <= C,

where the linear term of the textbook dual is constant because the Gaussian
kernel has a unit diagonal. The solver performs pairwise coordinate updates
on the maximal violating pair. With C = 1 (the only value the pipeline uses,
pre-filtering having replaced the soft margin) every training observation
ends up inside or on the sphere.

Inference needs only the support vectors: the squared feature-space distance
of a query x to the center is k(x,x) - 2 sum_i a_i k(x, x_i) + ||a||_K^2.
"""

from __future__ import annotations

import json
import time
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .data import IN, OUT, Dataset, IndexSet, LabelVector
from .errors import DimensionMismatchError
from .kernel import KernelSpec, gram_matrix, kernel_cross

#: Dual weights below this are treated as zero; the rest are support vectors.
SV_EPS = 1e-8
#: Slack on the in/out decision, absorbing solver and round-off noise.
PREDICT_EPS = 1e-9
#: Default stopping threshold on the KKT violation (max over decreasable
#: minus min over increasable of (K a)_i). Much tighter than needed for
#: classification so that training points sit on/inside the sphere to within
#: a few ulps of the decision slack.
DEFAULT_KKT_TOL = 1e-10
DEFAULT_MAX_UPDATES = 1_000_000
_GRAD_REFRESH = 4096


@dataclass(frozen=True, eq=False)
class SvddModel:
    """Trained ball: dual weights, radius, and the support vectors."""

    alpha: np.ndarray
    support_vectors: IndexSet
    radius_sq: float
    center_norm_sq: float
    kernel: KernelSpec
    training_refs: np.ndarray
    n_train: int
    converged: bool
    kkt_gap: float
    n_updates: int

    @property
    def sv_points(self) -> np.ndarray:
        return self.training_refs[self.support_vectors.zero_based]

    @property
    def sv_alpha(self) -> np.ndarray:
        return self.alpha[self.support_vectors.zero_based]

    @property
    def m(self) -> int:
        return self.training_refs.shape[1]


@dataclass(frozen=True)
class Prediction:
    """Decision for one query: inside the sphere iff margin >= -PREDICT_EPS."""

    label: str
    squared_distance: float
    margin: float


def train_svdd(
    data: Dataset,
    kernel: KernelSpec,
    C: float = 1.0,
    tol: float = DEFAULT_KKT_TOL,
    max_updates: int = DEFAULT_MAX_UPDATES,
) -> SvddModel:
    """Fit the minimum enclosing ball of `data` in kernel feature space.

    C stays at 1 everywhere in the sampling pipeline; it is exposed for unit
    tests of the dual only. Non-convergence within `max_updates` emits a
    warning carrying the final KKT gap.
    """
    if not 0.0 < C <= 1.0:
        raise ValueError(f"C must lie in (0, 1], got {C}")
    if C * data.n < 1.0:
        raise ValueError(f"infeasible dual: C*N = {C * data.n} < 1")
    K = gram_matrix(data, kernel).values
    n = data.n

    alpha = np.full(n, 1.0 / n)
    G = K @ alpha
    updates = 0
    gap = np.inf
    converged = False
    while True:
        can_up = alpha < C
        can_down = alpha > 0.0
        if not can_up.any() or not can_down.any():
            gap = 0.0
            converged = True
            break
        i = int(np.argmin(np.where(can_up, G, np.inf)))
        j = int(np.argmax(np.where(can_down, G, -np.inf)))
        gap = float(G[j] - G[i])
        if gap < tol:
            converged = True
            break
        if updates >= max_updates:
            break
        eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
        limit = min(C - alpha[i], alpha[j])
        delta = limit if eta <= 0.0 else min(gap / eta, limit)
        pair_sum = alpha[i] + alpha[j]
        new_i = min(C, alpha[i] + delta)
        new_j = max(0.0, pair_sum - new_i)
        if new_i == alpha[i] and new_j == alpha[j]:
            break  # step below float resolution; gap is as small as it gets
        G += (new_i - alpha[i]) * K[:, i] + (new_j - alpha[j]) * K[:, j]
        alpha[i], alpha[j] = new_i, new_j
        updates += 1
        if updates % _GRAD_REFRESH == 0:
            G = K @ alpha

    if not converged:
        warnings.warn(
            f"SVDD solver stopped after {updates} pair updates with KKT gap {gap:.3e} "
            f"(threshold {tol:.1e})",
            RuntimeWarning,
        )

    G = K @ alpha
    center_norm_sq = float(alpha @ G)
    sqdist = 1.0 - 2.0 * G + center_norm_sq
    unconstrained = (alpha > SV_EPS) & (alpha < C - SV_EPS)
    at_bound = alpha >= C - SV_EPS
    if unconstrained.any():
        radius_sq = float(sqdist[unconstrained].mean())
    elif at_bound.any():
        radius_sq = float(sqdist[at_bound].max())
    else:
        radius_sq = float(sqdist.max())
    radius_sq = max(radius_sq, 0.0)

    return SvddModel(
        alpha=alpha,
        support_vectors=IndexSet(np.flatnonzero(alpha > SV_EPS) + 1),
        radius_sq=radius_sq,
        center_norm_sq=center_norm_sq,
        kernel=kernel,
        training_refs=data.X,
        n_train=n,
        converged=converged,
        kkt_gap=gap,
        n_updates=updates,
    )


def _squared_distances(model: SvddModel, queries: np.ndarray) -> np.ndarray:
    Kq = kernel_cross(queries, model.sv_points, model.kernel.gamma)
    return 1.0 - 2.0 * (Kq @ model.sv_alpha) + model.center_norm_sq


def predict(model: SvddModel, x) -> Prediction:
    """Classify a single M-vector against the trained ball."""
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.size != model.m:
        raise DimensionMismatchError(f"query has dimension {x.size}, model expects {model.m}")
    sqdist = float(_squared_distances(model, x.reshape(1, -1))[0])
    margin = model.radius_sq - sqdist
    return Prediction(IN if margin >= -PREDICT_EPS else OUT, sqdist, margin)


def predict_batch(
    model: SvddModel, data: Union[Dataset, np.ndarray]
) -> tuple[LabelVector, float]:
    """Classify a batch; returns labels and inference seconds per 1000 queries."""
    queries = data.X if isinstance(data, Dataset) else np.atleast_2d(np.asarray(data, dtype=np.float64))
    if queries.size == 0:
        return LabelVector(np.empty(0, dtype=object)), 0.0
    if queries.shape[1] != model.m:
        raise DimensionMismatchError(
            f"batch has dimension {queries.shape[1]}, model expects {model.m}"
        )
    t0 = time.perf_counter()
    sqdist = _squared_distances(model, queries)
    labels = np.where(model.radius_sq - sqdist >= -PREDICT_EPS, IN, OUT).astype(object)
    elapsed = time.perf_counter() - t0
    return LabelVector(labels), elapsed / queries.shape[0] * 1000.0


# ---------------------------------------------------------------------------
# Serialization: JSON with support vectors only; float rendering round-trips
# exactly, so a loaded model predicts identically.


def model_to_json(model: SvddModel) -> str:
    doc = {
        "format": "svdd-model-v1",
        "gamma": model.kernel.gamma,
        "radius_sq": model.radius_sq,
        "center_norm_sq": model.center_norm_sq,
        "n_train": model.n_train,
        "support_indices": [int(i) for i in model.support_vectors],
        "alpha": [float(a) for a in model.sv_alpha],
        "support_points": [[float(v) for v in row] for row in model.sv_points],
        "converged": model.converged,
        "kkt_gap": model.kkt_gap,
    }
    return json.dumps(doc, indent=2) + "\n"


def model_from_json(text: str) -> SvddModel:
    doc = json.loads(text)
    if doc.get("format") != "svdd-model-v1":
        raise ValueError(f"not a serialized SVDD model (format={doc.get('format')!r})")
    points = np.asarray(doc["support_points"], dtype=np.float64)
    alpha = np.asarray(doc["alpha"], dtype=np.float64)
    if points.ndim != 2 or len(alpha) != points.shape[0]:
        raise ValueError("alpha and support_points disagree in length")
    return SvddModel(
        alpha=alpha,
        support_vectors=IndexSet.full(len(alpha)),
        radius_sq=float(doc["radius_sq"]),
        center_norm_sq=float(doc["center_norm_sq"]),
        kernel=KernelSpec(float(doc["gamma"])),
        training_refs=points,
        n_train=int(doc["n_train"]),
        converged=bool(doc["converged"]),
        kkt_gap=float(doc["kkt_gap"]),
        n_updates=0,
    )


def save_model(model: SvddModel, path: Union[str, Path]) -> None:
    Path(path).write_text(model_to_json(model))


def load_model(path: Union[str, Path]) -> SvddModel:
    return model_from_json(Path(path).read_text())
