"""Command-line entry point.

Subcommands cover the full pipeline: `gen` (synthetic data), `sample`
(density-based or random selection), `train` (SVDD model to JSON), `eval`
(score a model or run end-to-end), `bench` (benchmark suite to CSV), and
`oracle` (exhaustive optimum vs. the greedy sampler on tiny inputs).

Exit codes: 0 success, 1 usage error, 2 runtime error. Index files are plain
text, one 1-based index per line.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import RandomSampleConfig, random_sample
from .data import Dataset, IndexSet, load_csv, write_csv, write_report
from .errors import SvddSamplingError
from .evaluation import (
    GAMMA_RULES,
    EvalConfig,
    RunReport,
    benchmark_suite,
    evaluate_pipeline,
    mcc,
)
from .kernel import KernelSpec, gram_matrix
from .prefilter import prefilter
from .rapid import rapid_sample_traced
from .sop import check_feasible, delta_fit, solve_sop_exact
from .svdd import load_model, predict_batch, save_model, train_svdd
from .synthetic import MixtureConfig, generate_mixture


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _ranged_float(lo, hi, lo_open=False, hi_open=False):
    def parse(text):
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{text!r} is not a real number") from None
        if (value < lo or value > hi or (lo_open and value == lo) or (hi_open and value == hi)):
            left, right = "(" if lo_open else "[", ")" if hi_open else "]"
            raise argparse.ArgumentTypeError(f"{value} outside {left}{lo}, {hi}{right}")
        return value

    return parse


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{value} is not >= 1")
    return value


def _parse_label_map(text):
    mapping = {}
    for part in text.split(","):
        if "=" not in part:
            raise argparse.ArgumentTypeError(f"label map entry {part!r} is not of the form value=in|out")
        raw, target = part.split("=", 1)
        if target not in ("in", "out"):
            raise argparse.ArgumentTypeError(f"label map target {target!r} must be 'in' or 'out'")
        mapping[raw] = target
    return mapping


def _add_io_args(p, output=True):
    p.add_argument("--in", dest="input", required=True, metavar="CSV", help="input dataset (CSV)")
    if output:
        p.add_argument("--out", dest="output", required=True, metavar="PATH", help="output file")
    p.add_argument("--label-column", help="name of the label column, if the file has one")
    p.add_argument(
        "--label-map",
        type=_parse_label_map,
        help="mapping from raw label values to in/out, e.g. 'yes=out,no=in' "
        "(may be omitted when the column already holds in/out)",
    )


def _add_gamma_args(p):
    p.add_argument("--gamma", type=_ranged_float(0.0, float("inf")), help="explicit kernel bandwidth gamma >= 0")
    p.add_argument(
        "--gamma-rule",
        choices=sorted(GAMMA_RULES),
        help="bandwidth selection rule (default: scott); incompatible with --gamma",
    )


def _add_sampler_args(p):
    p.add_argument("--method", choices=("rapid", "rand"), default="rapid", help="sampling method (default: rapid)")
    p.add_argument(
        "--p-out",
        type=_ranged_float(0.0, 1.0, hi_open=True),
        default=0.05,
        help="expected outlier fraction in [0, 1) for pre-filtering (default: 0.05)",
    )
    p.add_argument(
        "--ratio",
        type=_ranged_float(0.0, 1.0, lo_open=True),
        help="sample ratio in (0, 1], required for --method rand",
    )
    p.add_argument("--seed", type=int, default=0, help="seed for random sampling (default: 0)")


def _load(args):
    return load_csv(args.input, args.label_column, args.label_map)


def _gamma_for(data, args):
    if args.gamma is not None and args.gamma_rule is not None:
        raise UsageError("pass either --gamma or --gamma-rule, not both")
    if args.gamma is not None:
        return args.gamma
    return GAMMA_RULES[args.gamma_rule or "scott"](data)


def _read_index_file(path):
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise SvddSamplingError(f"{path}: index file is empty")
    try:
        return IndexSet(np.asarray([int(ln) for ln in lines], dtype=np.int64))
    except ValueError as exc:
        raise SvddSamplingError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_gen(args):
    config = MixtureConfig(
        n=args.n, m=args.m, components=args.components, outlier_ratio=args.outlier_ratio, seed=args.seed
    )
    data, labels = generate_mixture(config)
    write_csv(data, args.output, labels)
    print(f"wrote {data.n} observations ({args.m} features, {args.components} components) to {args.output}")
    return 0


def _cmd_sample(args):
    if args.method == "rand" and args.ratio is None:
        raise UsageError("--method rand requires --ratio")
    data, _ = _load(args)
    kernel = KernelSpec(_gamma_for(data, args))
    gram = gram_matrix(data, kernel)
    if args.method == "rapid":
        selection, trace = rapid_sample_traced(gram, args.p_out)
        if args.trace:
            lines = ["iteration,removed,theta_min,violator"]
            for k, step in enumerate(trace.steps, start=1):
                violator = "" if step.violator is None else step.violator
                lines.append(f"{k},{step.removed},{step.theta_min!r},{violator}")
            Path(args.trace).write_text("\n".join(lines) + "\n")
    else:
        pf = prefilter(gram, args.p_out)
        selection = random_sample(pf.inliers, RandomSampleConfig(args.ratio, args.seed), prefilter=pf)
    Path(args.output).write_text("\n".join(str(i) for i in selection.sample) + "\n")
    print(
        f"{args.method}: selected {selection.size} of {data.n} observations "
        f"(ratio {selection.size / data.n:.4f}, gamma {kernel.gamma:.6g}) -> {args.output}"
    )
    return 0


def _cmd_train(args):
    data, _ = _load(args)
    if args.sample:
        subset = _read_index_file(args.sample)
        subset.validate_max(data.n)
        training = data.restrict(subset)
    else:
        training = data
    kernel = KernelSpec(_gamma_for(data, args))
    model = train_svdd(training, kernel)
    save_model(model, args.output)
    print(
        f"trained on {training.n} observations: {len(model.support_vectors)} support vectors, "
        f"R^2 {model.radius_sq:.6g} -> {args.output}"
    )
    return 0


def _cmd_eval(args):
    data, truth = _load(args)
    if truth is None:
        raise UsageError("eval needs ground-truth labels; pass --label-column (and --label-map)")
    dataset_id = args.dataset_id or Path(args.input).stem
    if args.model:
        model = load_model(args.model)
        labels, t_inf = predict_batch(model, data)
        report = RunReport(
            dataset=dataset_id,
            method="model",
            t_samp=0.0,
            t_train=0.0,
            t_inf=t_inf,
            size=model.n_train,
            ratio=model.n_train / data.n,
            mcc=mcc(truth, labels),
            gamma=model.kernel.gamma,
            p_out=None,
            seed=None,
        )
    else:
        if args.method == "rand" and args.ratio is None:
            raise UsageError("--method rand requires --ratio")
        if args.gamma is not None and args.gamma_rule is not None:
            raise UsageError("pass either --gamma or --gamma-rule, not both")
        report = evaluate_pipeline(
            data,
            truth,
            method=args.method,
            gamma_rule=args.gamma_rule or "scott",
            p_out=args.p_out,
            seed=args.seed,
            ratio=args.ratio,
            gamma=args.gamma,
            dataset_id=dataset_id,
        )
    print(
        f"{report.dataset} [{report.method}]: mcc {report.mcc:.4f}, sample {report.size} "
        f"(ratio {report.ratio:.4f}), t_samp {report.t_samp:.4f}s, t_train {report.t_train:.4f}s, "
        f"t_inf {report.t_inf:.4f}s/1000"
    )
    if args.output:
        write_report(report, args.output, args.format)
        print(f"report -> {args.output}")
    return 0


def _cmd_bench(args):
    methods = args.methods.split(",")
    for m in methods:
        if m not in ("rapid", "rand"):
            raise UsageError(f"unknown method {m!r} in --methods")
    if args.gamma is not None and args.gamma_rule is not None:
        raise UsageError("pass either --gamma or --gamma-rule, not both")
    ratios = [float(r) for r in args.ratios.split(",")] if args.ratios else [None]
    configs = []
    for path in args.input:
        for method in methods:
            if method == "rand":
                if ratios == [None]:
                    raise UsageError("--methods rand requires --ratios")
                method_ratios = ratios
            else:
                method_ratios = [None]
            for ratio in method_ratios:
                dataset_id = Path(path).stem
                configs.append(
                    EvalConfig(
                        dataset_id=dataset_id,
                        source=path,
                        label_column=args.label_column,
                        label_map=args.label_map,
                        method=method,
                        gamma_rule=args.gamma_rule or "scott",
                        gamma=args.gamma,
                        p_out=args.p_out,
                        seed=args.seed,
                        ratio=ratio,
                    )
                )
    result = benchmark_suite(configs, repetitions=args.repetitions)
    for summary in result.summaries:
        print(
            f"{summary['dataset']} [{summary['method']}] over {summary['runs']} run(s): "
            f"median mcc {summary['median_mcc']:.4f}, median size {summary['median_size']:.0f}, "
            f"median t_samp {summary['median_t_samp']:.4f}s"
        )
    for name, message in result.failures:
        print(f"FAILED {name}: {message}", file=sys.stderr)
    if result.reports:
        write_report(result.reports, args.output, "csv")
        print(f"{len(result.reports)} run report(s) -> {args.output}")
    return 0 if result.reports else 2


def _cmd_oracle(args):
    data, _ = _load(args)
    kernel = KernelSpec(_gamma_for(data, args))
    gram = gram_matrix(data, kernel)
    pf = prefilter(gram, args.p_out)
    exact = solve_sop_exact(gram, pf.inliers)
    selection, _ = rapid_sample_traced(gram, args.p_out)
    rapid_gap = delta_fit(gram, selection.sample)
    feasible, violation = check_feasible(gram, pf.inliers, selection.sample, tolerance=1e-9)
    print(f"inliers: {len(pf.inliers)}")
    print(f"exact_delta_fit: {exact.objective:.12g}")
    print(f"exact_sample_size: {len(exact.sample)}")
    print(f"exact_sample: {' '.join(str(i) for i in exact.sample)}")
    print(f"rapid_delta_fit: {rapid_gap:.12g}")
    print(f"rapid_sample_size: {selection.size}")
    print(f"rapid_sample: {' '.join(str(i) for i in selection.sample)}")
    print(f"rapid_feasible: {'true' if feasible else 'false'}")
    if violation:
        print(f"rapid_violation: {violation}")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="svdd-sampling", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("gen", help="generate a labeled Gaussian-mixture dataset")
    p.add_argument("--n", type=_positive_int, required=True, help="number of observations (>= 1)")
    p.add_argument("--m", type=_positive_int, required=True, help="number of features (>= 1)")
    p.add_argument("--components", type=_positive_int, required=True, help="number of mixture components (>= 1)")
    p.add_argument(
        "--outlier-ratio",
        type=_ranged_float(0.0, 1.0, hi_open=True),
        default=0.0,
        help="fraction of uniform outliers in [0, 1) (default: 0)",
    )
    p.add_argument("--seed", type=int, default=0, help="generator seed (default: 0)")
    p.add_argument("--out", dest="output", required=True, metavar="CSV", help="output CSV (with label column)")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("sample", help="select a sample of the pre-filtered inliers")
    _add_io_args(p)
    _add_gamma_args(p)
    _add_sampler_args(p)
    p.add_argument("--trace", metavar="CSV", help="write the per-iteration trace of the greedy sampler")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("train", help="train an SVDD model on a sample (or the full data)")
    _add_io_args(p)
    _add_gamma_args(p)
    p.add_argument("--sample", metavar="IDX", help="index file from 'sample'; omit to train on all rows")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="score a saved model or run the pipeline end to end")
    _add_io_args(p, output=False)
    _add_gamma_args(p)
    _add_sampler_args(p)
    p.add_argument("--model", metavar="JSON", help="saved model; skips sampling and training")
    p.add_argument("--out", dest="output", metavar="PATH", help="write the run report here")
    p.add_argument("--format", choices=("json", "csv"), default="json", help="report format (default: json)")
    p.add_argument("--dataset-id", help="dataset name in the report (default: input file stem)")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("bench", help="run the benchmark suite over datasets and methods")
    p.add_argument(
        "--in", dest="input", action="append", required=True, metavar="CSV", help="dataset CSV (repeatable)"
    )
    p.add_argument("--label-column", help="name of the label column")
    p.add_argument("--label-map", type=_parse_label_map, help="raw-value mapping, e.g. 'yes=out,no=in'")
    _add_gamma_args(p)
    p.add_argument("--methods", default="rapid", help="comma list of methods, e.g. 'rapid,rand' (default: rapid)")
    p.add_argument("--ratios", help="comma list of sample ratios for rand, e.g. '0.05,0.1'")
    p.add_argument(
        "--p-out", type=_ranged_float(0.0, 1.0, hi_open=True), default=0.05, help="pre-filter fraction (default: 0.05)"
    )
    p.add_argument("--seed", type=int, default=0, help="base seed (default: 0)")
    p.add_argument("--repetitions", type=_positive_int, default=5, help="runs per non-deterministic config (default: 5)")
    p.add_argument("--out", dest="output", required=True, metavar="CSV", help="per-run report table")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("oracle", help="exhaustive optimum vs. greedy sample on a tiny dataset (<= 15 inliers)")
    _add_io_args(p, output=False)
    _add_gamma_args(p)
    p.add_argument(
        "--p-out", type=_ranged_float(0.0, 1.0, hi_open=True), default=0.0, help="pre-filter fraction (default: 0)"
    )
    p.set_defaults(func=_cmd_oracle)

    return parser


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    if getattr(args, "command", None) is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (SvddSamplingError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
