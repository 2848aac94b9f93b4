"""Command-line interface.

Exit status: 0 on success, 1 on invalid input or arguments, 2 on I/O errors.
Progress goes to stderr; stdout carries results only.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .core import LabeledDataset, ValidationError
from .data_io import DataIOError, load_series, load_ucr, report_to_dict, save_result, write_csv_rows, write_json
from .dtw import dtw_sum
from .pipeline import (
    DEFAULT_K_GRID,
    average_avg,
    averaging_experiment,
    classify,
    fit_nearest_centroid,
    stratified_halves,
    tune_k,
)
from .trainer import TrainConfig, train


class UsageError(ValidationError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _common(p: argparse.ArgumentParser, output: bool = True) -> None:
    p.add_argument("--input", "-i", required=True, help="label-first CSV/TSV file")
    if output:
        p.add_argument("--output", "-o", help="output file (JSON document or CSV stem)")
        p.add_argument("--format", choices=("json", "csv"), default=None, help="default: from --output suffix, else json")
    p.add_argument("--k", type=int, default=8, help="number of sine components (default 8)")
    p.add_argument("--iters", type=int, default=100, help="optimization iterations (default 100)")
    p.add_argument("--lr", type=float, default=0.01, help="Adam step size (default 0.01)")
    p.add_argument("--window", type=int, default=10, help="sinc half width (default 10)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--znorm", action="store_true", help="z-normalize each series on load")
    p.add_argument("--exact-grad", action="store_true", help="differentiate through the centroid as well")
    p.add_argument("--tol", type=float, default=None, help="stop early when the relative loss change drops below this")
    p.add_argument("--quiet", "-q", action="store_true", help="no progress or summary output")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ttw", description="Align, average and classify time series with gradient-trained warps.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("average", help="centroid of a set of series")
    _common(p)
    p.add_argument("--method", choices=("ttw", "avg"), default="ttw")
    p.add_argument("--label", type=int, default=None, help="only use series with this label")

    p = sub.add_parser("align", help="synchronized series and warping functions")
    _common(p)
    p.add_argument("--label", type=int, default=None, help="only use series with this label")

    p = sub.add_parser("tune-k", help="score each K by the DTW sum of its centroid")
    _common(p)
    p.add_argument("--grid", type=_int_list, default=list(DEFAULT_K_GRID))
    p.add_argument("--label", type=int, default=None, help="only use series with this label")

    p = sub.add_parser("classify", help="nearest-centroid classification")
    _common(p)
    p.add_argument("--test", required=True, help="test file in the same format as --input")
    p.add_argument("--grid", type=_int_list, default=list(DEFAULT_K_GRID))
    p.add_argument("--no-validation", action="store_true", help="fit on all training data, choose K by DTW sum")

    p = sub.add_parser("experiment", help="compare averaging methods on random per-class sets")
    _common(p)
    p.add_argument("--sets", type=int, default=10, help="sets per class (default 10)")
    p.add_argument("--set-size", type=int, default=10, help="series per set (default 10)")
    p.add_argument("--methods", default="ttw,avg")
    p.add_argument("--grid", type=_int_list, default=None, help="tune K per set over these values")
    p.add_argument("--replace", action="store_true", help="sample with replacement when a class is small")

    p = sub.add_parser("eval", help="DTW sum of a candidate series against a dataset")
    _common(p, output=False)
    p.add_argument("--candidate", required=True, help="result JSON (uses its centroid) or one-row CSV")
    p.add_argument("--label", type=int, default=None, help="only use series with this label")
    return parser


def _config(args) -> TrainConfig:
    return TrainConfig(
        K=args.k,
        iterations=args.iters,
        step_size=args.lr,
        window_half_width=args.window,
        seed=args.seed,
        exact_gradient=args.exact_grad,
        tol=args.tol,
    )


def _threads() -> int:
    raw = os.environ.get("TTW_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"TTW_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise UsageError("TTW_THREADS must be >= 0")
    return n if n > 0 else (os.cpu_count() or 1)


def _select(ds: LabeledDataset, label) -> LabeledDataset:
    if label is None:
        return ds
    if ds.labels is None or not np.any(ds.labels == label):
        raise ValidationError(f"no series with label {label}")
    return ds.of_class(label)


def _format(args) -> str:
    if args.format:
        return args.format
    return "csv" if args.output and Path(args.output).suffix == ".csv" else "json"


def _emit(args, text: str) -> None:
    if not args.quiet:
        print(text)


def _progress(args):
    if args.quiet:
        return None

    def report(i, loss):
        if i == 1 or i % 10 == 0:
            print(f"iteration {i}: loss {loss:.6g}", file=sys.stderr)

    return report


def cmd_average(args) -> None:
    ds, _ = load_ucr(args.input, znorm=args.znorm)
    ds = _select(ds, args.label)
    cfg = _config(args)
    fmt = _format(args)
    if args.method == "avg":
        centroid = average_avg(ds)
        _emit(args, f"avg centroid of {len(ds)} series, dtw_sum {dtw_sum(centroid, ds):.10g}")
        if args.output:
            out = Path(args.output)
            if fmt == "json":
                write_json(out, {"method": "avg", "centroid": centroid.tolist()})
            else:
                stem = out.with_suffix("")
                write_csv_rows(stem.with_name(f"{stem.name}_centroid.csv"), [centroid])
        return
    result = train(ds, cfg, callback=_progress(args))
    _emit(args, f"ttw centroid of {len(ds)} series, loss {result.loss_trace[0]:.6g} -> {result.final_loss:.6g}")
    if args.output:
        out = Path(args.output)
        if fmt == "json":
            write_json(
                out,
                {
                    "method": "ttw",
                    "centroid": result.centroid.tolist(),
                    "loss_trace": result.loss_trace.tolist(),
                    "final_loss": result.final_loss,
                    "config": cfg.to_dict(),
                },
            )
        else:
            stem = out.with_suffix("")
            write_csv_rows(stem.with_name(f"{stem.name}_centroid.csv"), [result.centroid])
            write_csv_rows(stem.with_name(f"{stem.name}_loss.csv"), result.loss_trace[:, None])


def cmd_align(args) -> None:
    ds, _ = load_ucr(args.input, znorm=args.znorm)
    ds = _select(ds, args.label)
    result = train(ds, _config(args), callback=_progress(args))
    _emit(args, f"aligned {len(ds)} series, loss {result.loss_trace[0]:.6g} -> {result.final_loss:.6g}")
    if result.boundary_violations:
        _emit(args, f"warning: clamp moved the end point {result.boundary_violations} times")
    if args.output:
        save_result(result, args.output, _format(args))


def cmd_tune_k(args) -> None:
    ds, _ = load_ucr(args.input, znorm=args.znorm)
    ds = _select(ds, args.label)
    best, scores = tune_k(ds, args.grid, _config(args), n_jobs=_threads())
    for k, v in scores.items():
        print(f"K={k}\tdtw_sum={v:.10g}")
    print(f"best K={best}")
    if args.output:
        doc = {"best_k": best, "scores": {str(k): v for k, v in scores.items()}}
        save_result(doc, args.output, _format(args))


def cmd_classify(args) -> None:
    train_ds, _ = load_ucr(args.input, znorm=args.znorm)
    test, _ = load_ucr(args.test, znorm=args.znorm)
    if train_ds.length != test.length:
        raise ValidationError(f"train length {train_ds.length} differs from test length {test.length}")
    cfg = _config(args)
    if args.no_validation:
        model = fit_nearest_centroid(train_ds, None, args.grid, cfg, n_jobs=_threads())
    else:
        fit, val = stratified_halves(train_ds, seed=args.seed)
        model = fit_nearest_centroid(fit, val, args.grid, cfg, n_jobs=_threads())
    report = classify(model, test)
    print(f"accuracy {report.accuracy:.6f}")
    print("confusion (rows: true, columns: predicted) labels " + " ".join(map(str, report.labels)))
    for row in report.confusion:
        print(" ".join(str(int(v)) for v in row))
    _emit(args, "K per class: " + ", ".join(f"{c}:{k}" for c, k in model.per_class_k.items()))
    if args.output:
        doc = report_to_dict(report) | {"tuning": model.tuning, "trail": model.trail}
        save_result(doc, args.output, _format(args))


def cmd_experiment(args) -> None:
    ds, _ = load_ucr(args.input, znorm=args.znorm)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    reports = averaging_experiment(
        ds,
        sets_per_class=args.sets,
        set_size=args.set_size,
        methods=methods,
        cfg=_config(args),
        seed=args.seed,
        replace=args.replace,
        k_grid=args.grid,
        n_jobs=_threads(),
    )
    for r in reports:
        print(f"class {r.label}\t{r.method}\tmean dtw_sum {r.mean_dtw_sum:.10g}")
    if args.output:
        save_result([report_to_dict(r) for r in reports], args.output, _format(args))


def cmd_eval(args) -> None:
    ds, _ = load_ucr(args.input, znorm=args.znorm)
    ds = _select(ds, args.label)
    candidate = load_series(args.candidate)
    print(f"{dtw_sum(candidate, ds):.17g}")


COMMANDS = {
    "average": cmd_average,
    "align": cmd_align,
    "tune-k": cmd_tune_k,
    "classify": cmd_classify,
    "experiment": cmd_experiment,
    "eval": cmd_eval,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args)
    except DataIOError as exc:
        print(f"ttw: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, ValueError) as exc:
        print(f"ttw: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
