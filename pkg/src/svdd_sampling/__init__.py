"""Density-based sample selection and hard-margin SVDD training.

The pipeline: estimate empirical kernel densities, pre-filter the expected
outlier fraction away, greedily shrink the inlier set to a small sample whose
density stays near-uniform, train SVDD (C = 1) on the sample, and classify.
"""

__version__ = "0.1.0"

from .baselines import RandomSampleConfig, random_sample, sample_size_for_ratio
from .data import (
    IN,
    OUT,
    Dataset,
    IndexSet,
    LabelVector,
    load_csv,
    write_csv,
    write_report,
)
from .density import (
    BoundarySet,
    DensityVector,
    LevelThreshold,
    boundary_points,
    default_boundary_delta,
    density_quantile_threshold,
    empirical_density,
    level_set_classify,
)
from .errors import (
    DataFormatError,
    DegenerateDataError,
    DimensionMismatchError,
    PipelineStageError,
    SvddSamplingError,
)
from .evaluation import (
    BenchmarkResult,
    ConfusionCounts,
    EvalConfig,
    RunReport,
    benchmark_suite,
    confusion_counts,
    evaluate_pipeline,
    mcc,
    mcc_from_counts,
)
from .kernel import (
    GramMatrix,
    KernelSpec,
    bandwidth_modified_mean,
    bandwidth_scott,
    gaussian_kernel,
    gram_matrix,
    kernel_cross,
)
from .prefilter import PrefilterResult, prefilter
from .rapid import RapidTrace, SampleSelection, TraceStep, rapid_sample, rapid_sample_traced
from .sop import SopSolution, check_feasible, delta_fit, sample_theta_range, solve_sop_exact
from .svdd import (
    Prediction,
    SvddModel,
    load_model,
    model_from_json,
    model_to_json,
    predict,
    predict_batch,
    save_model,
    train_svdd,
)
from .synthetic import MixtureConfig, generate_mixture

__all__ = [
    "IN",
    "OUT",
    "BenchmarkResult",
    "BoundarySet",
    "ConfusionCounts",
    "DataFormatError",
    "Dataset",
    "DegenerateDataError",
    "DensityVector",
    "DimensionMismatchError",
    "EvalConfig",
    "GramMatrix",
    "IndexSet",
    "KernelSpec",
    "LabelVector",
    "LevelThreshold",
    "MixtureConfig",
    "PipelineStageError",
    "Prediction",
    "PrefilterResult",
    "RandomSampleConfig",
    "RapidTrace",
    "RunReport",
    "SampleSelection",
    "SopSolution",
    "SvddModel",
    "SvddSamplingError",
    "TraceStep",
    "bandwidth_modified_mean",
    "bandwidth_scott",
    "benchmark_suite",
    "boundary_points",
    "check_feasible",
    "confusion_counts",
    "default_boundary_delta",
    "delta_fit",
    "density_quantile_threshold",
    "empirical_density",
    "evaluate_pipeline",
    "gaussian_kernel",
    "generate_mixture",
    "gram_matrix",
    "kernel_cross",
    "level_set_classify",
    "load_csv",
    "load_model",
    "mcc",
    "mcc_from_counts",
    "model_from_json",
    "model_to_json",
    "predict",
    "predict_batch",
    "prefilter",
    "random_sample",
    "rapid_sample",
    "rapid_sample_traced",
    "sample_size_for_ratio",
    "sample_theta_range",
    "save_model",
    "solve_sop_exact",
    "train_svdd",
    "write_csv",
    "write_report",
]
