"""Classification quality, timings, and end-to-end benchmark orchestration.

Quality is the Matthews correlation coefficient with `out` as the positive
class, computed on the full dataset: the pipeline is unsupervised, so no
train/test split is needed. Each run reports the benchmark-table metrics
(t_samp, t_train, t_inf, size, ratio, mcc) plus a parameter echo.
"""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .baselines import RandomSampleConfig, random_sample
from .data import Dataset, LabelVector, load_csv
from .errors import PipelineStageError
from .kernel import KernelSpec, bandwidth_modified_mean, bandwidth_scott, gram_matrix
from .prefilter import prefilter
from .rapid import SampleSelection, rapid_sample
from .svdd import predict_batch, train_svdd

GAMMA_RULES: dict[str, Callable[[Dataset], float]] = {
    "scott": bandwidth_scott,
    "modified_mean": bandwidth_modified_mean,
}

#: Samplers that ignore the seed; the benchmark suite runs them once.
DETERMINISTIC_METHODS = frozenset({"rapid"})


@dataclass(frozen=True)
class ConfusionCounts:
    """Binary confusion counts with `out` as the positive class."""

    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


@dataclass(frozen=True)
class RunReport:
    """One pipeline run in the benchmark-table schema, plus a parameter echo."""

    dataset: str
    method: str
    t_samp: float
    t_train: float
    t_inf: float
    size: int
    ratio: float
    mcc: float
    gamma: float
    p_out: float
    seed: Optional[int]


def confusion_counts(truth: LabelVector, predicted: LabelVector) -> ConfusionCounts:
    if truth.n != predicted.n:
        raise ValueError(f"length mismatch: {truth.n} truth labels vs {predicted.n} predictions")
    if truth.n == 0:
        raise ValueError("empty label vectors")
    t = truth.is_outlier()
    p = predicted.is_outlier()
    return ConfusionCounts(
        tp=int(np.sum(t & p)),
        tn=int(np.sum(~t & ~p)),
        fp=int(np.sum(~t & p)),
        fn=int(np.sum(t & ~p)),
    )


def mcc_from_counts(c: ConfusionCounts) -> float:
    """Matthews correlation; 0 by convention when any denominator factor is 0."""
    denom = (c.tp + c.fp) * (c.tp + c.fn) * (c.tn + c.fp) * (c.tn + c.fn)
    if denom == 0:
        return 0.0
    return (c.tp * c.tn - c.fp * c.fn) / math.sqrt(denom)


def mcc(truth: LabelVector, predicted: LabelVector) -> float:
    return mcc_from_counts(confusion_counts(truth, predicted))


def _resolve_gamma(data: Dataset, gamma: Optional[float], gamma_rule: str) -> float:
    if gamma is not None:
        if gamma < 0:
            raise ValueError(f"gamma must be nonnegative, got {gamma}")
        return float(gamma)
    if gamma_rule not in GAMMA_RULES:
        raise ValueError(f"unknown gamma rule {gamma_rule!r}; expected one of {sorted(GAMMA_RULES)}")
    return GAMMA_RULES[gamma_rule](data)


def evaluate_pipeline(
    data: Dataset,
    truth: LabelVector,
    method: str = "rapid",
    gamma_rule: str = "scott",
    p_out: float = 0.05,
    seed: int = 0,
    ratio: Optional[float] = None,
    gamma: Optional[float] = None,
    dataset_id: str = "data",
) -> RunReport:
    """Run prefilter -> sampler -> SVDD -> inference and score against truth.

    t_samp covers the Gram matrix, pre-filtering, and selection (the sampling
    stage as a whole, kernel evaluations included); t_train the SVDD solve on
    the sample; t_inf is seconds per 1000 classified observations. Errors are
    re-raised with the failing stage named.
    """
    if truth.n != data.n:
        raise ValueError(f"{truth.n} truth labels for {data.n} observations")
    if method == "rand" and ratio is None:
        raise ValueError("method 'rand' needs a sample ratio")
    if method not in ("rapid", "rand"):
        raise ValueError(f"unknown sampling method {method!r}; expected 'rapid' or 'rand'")

    resolved_gamma = _stage("bandwidth", _resolve_gamma, data, gamma, gamma_rule)
    kernel = KernelSpec(resolved_gamma)

    t0 = time.perf_counter()
    selection = _stage("sampling", _run_sampler, data, kernel, method, p_out, seed, ratio)
    t_samp = time.perf_counter() - t0

    t0 = time.perf_counter()
    model = _stage("training", lambda: train_svdd(data.restrict(selection.sample), kernel))
    t_train = time.perf_counter() - t0

    labels, t_inf = _stage("inference", predict_batch, model, data)
    quality = _stage("scoring", mcc, truth, labels)

    return RunReport(
        dataset=dataset_id,
        method=method,
        t_samp=t_samp,
        t_train=t_train,
        t_inf=t_inf,
        size=selection.size,
        ratio=selection.size / data.n,
        mcc=quality,
        gamma=resolved_gamma,
        p_out=p_out,
        seed=seed,
    )


def _run_sampler(
    data: Dataset,
    kernel: KernelSpec,
    method: str,
    p_out: float,
    seed: int,
    ratio: Optional[float],
) -> SampleSelection:
    gram = gram_matrix(data, kernel)
    if method == "rapid":
        return rapid_sample(gram, p_out)
    pf = prefilter(gram, p_out)
    return random_sample(pf.inliers, RandomSampleConfig(ratio, seed), prefilter=pf)


def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except Exception as exc:
        raise PipelineStageError(name, str(exc)) from exc


# ---------------------------------------------------------------------------
# Benchmark suite


@dataclass(frozen=True)
class EvalConfig:
    """One benchmark cell: a dataset (inline or a CSV path) and run parameters."""

    dataset_id: str
    source: Union[Dataset, str, Path]
    truth: Optional[LabelVector] = None
    label_column: Optional[str] = None
    label_map: Optional[dict] = None
    method: str = "rapid"
    gamma_rule: str = "scott"
    gamma: Optional[float] = None
    p_out: float = 0.05
    seed: int = 0
    ratio: Optional[float] = None


@dataclass
class BenchmarkResult:
    """All per-run reports, per-config median/mean summaries, recorded failures."""

    reports: list[RunReport] = field(default_factory=list)
    summaries: list[dict] = field(default_factory=list)
    failures: list[tuple[str, str]] = field(default_factory=list)


_SUMMARY_METRICS = ("t_samp", "t_train", "t_inf", "size", "ratio", "mcc")


def benchmark_suite(configs: Sequence[EvalConfig], repetitions: int = 5) -> BenchmarkResult:
    """Run every config; non-deterministic methods repeat with distinct seeds.

    A failing config is recorded and the suite continues. Summaries carry the
    median and mean of each metric over a config's runs.
    """
    if not configs:
        raise ValueError("no benchmark configs given")
    if repetitions < 1:
        raise ValueError(f"repetitions must be >= 1, got {repetitions}")

    result = BenchmarkResult()
    for cfg in configs:
        runs = 1 if cfg.method in DETERMINISTIC_METHODS else repetitions
        cfg_reports = []
        try:
            data, truth = _resolve_source(cfg)
            for k in range(runs):
                cfg_reports.append(
                    evaluate_pipeline(
                        data,
                        truth,
                        method=cfg.method,
                        gamma_rule=cfg.gamma_rule,
                        p_out=cfg.p_out,
                        seed=cfg.seed + k,
                        ratio=cfg.ratio,
                        gamma=cfg.gamma,
                        dataset_id=cfg.dataset_id,
                    )
                )
        except Exception as exc:
            result.failures.append((f"{cfg.dataset_id}/{cfg.method}", str(exc)))
            continue
        result.reports.extend(cfg_reports)
        summary = {"dataset": cfg.dataset_id, "method": cfg.method, "runs": len(cfg_reports)}
        for metric in _SUMMARY_METRICS:
            values = [getattr(r, metric) for r in cfg_reports]
            summary[f"median_{metric}"] = statistics.median(values)
            summary[f"mean_{metric}"] = statistics.fmean(values)
        result.summaries.append(summary)
    return result


def _resolve_source(cfg: EvalConfig) -> tuple[Dataset, LabelVector]:
    if isinstance(cfg.source, Dataset):
        data, truth = cfg.source, cfg.truth
    else:
        data, truth = load_csv(cfg.source, cfg.label_column, cfg.label_map)
        if cfg.truth is not None:
            truth = cfg.truth
    if truth is None:
        raise ValueError(f"config {cfg.dataset_id!r} has no ground-truth labels")
    return data, truth
