"""Command-line surface: encode, decode, impute-train, impute-eval,
classify, baseline, and synth subcommands.

Every run writes a JSON manifest next to its outputs recording the command,
resolved parameters, and seeds; re-running with the same arguments produces
byte-identical artifacts. Numeric results are printed both as prose and as
machine-readable key=value lines.

Exit codes: 0 success, 1 validation/usage error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from . import __version__
from .classify import (
    DEFAULT_PENALTIES,
    DEFAULT_QUANTILES,
    DEFAULT_SIZES,
    SelectionGrid,
    baseline_1nn,
    compound_image,
    evaluate,
    model_select,
)
from .core import FieldKind, PaaConfig, RescaleMode, TimeSeries, paa
from .datasets import gen_synthetic, load_dataset, parse_ucr
from .errors import IoFailureError, LengthMismatchError, TsimgError
from .gaf import encode_gaf
from .impute import (
    DEFAULT_HIDDEN,
    DEFAULT_NOISE_RATE,
    GASF_TOLERANCE,
    RAW_TOLERANCE,
    TrainConfig,
    evaluate_imputation,
    train_da_pipeline,
)
from .io import load_model, read_matrix_csv, render_png, save_model, write_matrix_csv, write_ucr
from .mtf import encode_mtf
from .reconstruct import reconstruct_series


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with status 1, not 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _fmt_value(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _machine_lines(pairs: dict) -> None:
    for key, value in pairs.items():
        print(f"{key}={_fmt_value(value)}")


def _write_manifest(path, command: str, argv: list[str], params: dict, outputs: list[str]) -> None:
    doc = {
        "tool": "tsimg",
        "version": __version__,
        "command": command,
        "argv": argv,
        "params": params,
        "outputs": outputs,
    }
    try:
        with open(path, "w", encoding="ascii") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise IoFailureError(f"cannot write {path}: {exc}") from exc


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(",") if tok)
    except ValueError as exc:
        raise ValueError(f"expected comma-separated integers, got {text!r}") from exc


def _parse_penalties(text: str) -> tuple[float, ...]:
    """Accept either a comma list (1e-2,1,100) or a decade range (1e-4..1e4)."""
    if ".." in text:
        lo_text, hi_text = text.split("..", 1)
        try:
            lo = int(round(math.log10(float(lo_text))))
            hi = int(round(math.log10(float(hi_text))))
        except ValueError as exc:
            raise ValueError(f"bad penalty range {text!r}") from exc
        if hi < lo:
            raise ValueError(f"empty penalty range {text!r}")
        return tuple(10.0 ** k for k in range(lo, hi + 1))
    try:
        return tuple(float(tok) for tok in text.split(",") if tok)
    except ValueError as exc:
        raise ValueError(f"expected penalties as comma list or lo..hi decades, got {text!r}") from exc


def _resolve_size(args, n: int) -> int:
    if args.paa is not None and args.image_size is not None:
        raise ValueError("give either --paa or --image-size, not both")
    size = args.paa if args.paa is not None else args.image_size
    if size is None:
        return n
    if size < 1 or size > n:
        raise ValueError(f"size {size} out of range for series length {n}")
    return size


def _cmd_encode(args, argv) -> int:
    series_list = parse_ucr(args.input)
    n = len(series_list[0])
    size = _resolve_size(args, n)
    mode = RescaleMode(args.rescale)
    os.makedirs(args.out_dir, exist_ok=True)
    stem = Path(args.input).stem
    outputs: list[str] = []

    def emit(i: int, tag: str, field) -> None:
        csv_path = os.path.join(args.out_dir, f"{stem}_{i:04d}_{tag}.csv")
        write_matrix_csv(field, csv_path)
        outputs.append(csv_path)

    for i, series in enumerate(series_list):
        if args.encoding == "compound":
            image = compound_image(series, size, args.quantiles, mode)
            for tag, channel in zip(("gasf", "gadf", "mtf"), image.channels):
                emit(i, tag, channel)
            if args.png:
                png_path = os.path.join(args.out_dir, f"{stem}_{i:04d}_compound.png")
                render_png(image, png_path)
                outputs.append(png_path)
            continue
        if args.encoding == "mtf":
            field = encode_mtf(series, args.quantiles, size)
        else:
            field = encode_gaf(series, mode, PaaConfig(size), FieldKind(args.encoding))
        emit(i, args.encoding, field)
        if args.png:
            png_path = os.path.join(args.out_dir, f"{stem}_{i:04d}_{args.encoding}.png")
            render_png(field, png_path)
            outputs.append(png_path)

    params = {
        "input": args.input, "encoding": args.encoding, "rescale": args.rescale,
        "size": size, "quantiles": args.quantiles, "png": bool(args.png),
        "out_dir": args.out_dir,
    }
    _write_manifest(os.path.join(args.out_dir, "manifest.json"), "encode", argv, params, outputs)
    print(f"encoded {len(series_list)} series from {args.input} into {args.out_dir}")
    _machine_lines({"series": len(series_list), "size": size, "files": len(outputs)})
    return 0


def _cmd_decode(args, argv) -> int:
    field = read_matrix_csv(args.input)
    recovered = reconstruct_series(field)
    write_ucr([TimeSeries(recovered.values, label=0)], args.out)
    params = {"input": args.input, "out": args.out}
    _write_manifest(f"{args.out}.manifest.json", "decode", argv, params, [args.out])
    print(f"reconstructed a length-{len(recovered.values)} series into {args.out}")
    _machine_lines({"n": len(recovered.values)})
    return 0


def _load_training_pool(paths: list[str], common_length: int | None) -> list[TimeSeries]:
    pool: list[TimeSeries] = []
    for path in paths:
        for series in parse_ucr(path):
            if common_length is not None:
                series = TimeSeries(paa(series.values, PaaConfig(common_length)), series.label)
            pool.append(series)
    lengths = {len(s) for s in pool}
    if len(lengths) > 1:
        raise LengthMismatchError(
            f"training files mix series lengths {sorted(lengths)}; use --common-length"
        )
    return pool


def _cmd_impute_train(args, argv) -> int:
    pool = _load_training_pool(args.train, args.common_length)
    tolerance = args.tol
    if tolerance is None:
        tolerance = GASF_TOLERANCE if args.pipeline == "gasf" else RAW_TOLERANCE
    config = TrainConfig(
        batch_size=args.batch, tolerance=tolerance, learning_rate=args.lr,
        max_epochs=args.max_epochs, seed=args.seed,
    )
    model, history = train_da_pipeline(
        pool, args.pipeline, args.noise_rate, args.hidden, config, seed=args.seed
    )
    for epoch, mse in enumerate(history, start=1):
        print(f"epoch={epoch} mse={mse:.17g}", file=sys.stderr)
    save_model(model, args.model_out)
    params = {
        "train": list(args.train), "pipeline": args.pipeline,
        "noise_rate": args.noise_rate, "hidden": args.hidden, "batch": args.batch,
        "lr": args.lr, "tol": tolerance, "max_epochs": args.max_epochs,
        "seed": args.seed, "common_length": args.common_length,
        "model_out": args.model_out,
    }
    _write_manifest(f"{args.model_out}.manifest.json", "impute-train", argv, params, [args.model_out])
    print(
        f"trained {args.pipeline} pipeline on {len(pool)} series "
        f"({len(history)} epochs, final MSE {history[-1]:.6g}); model at {args.model_out}"
    )
    _machine_lines({
        "series": len(pool), "epochs": len(history), "final_mse": history[-1],
        "input_dim": model.input_dim, "hidden": model.hidden_dim,
    })
    return 0


def _cmd_impute_eval(args, argv) -> int:
    model = load_model(args.model)
    test = parse_ucr(args.test)
    n = len(test[0])
    expected = n * n if args.pipeline == "gasf" else n
    if model.input_dim != expected:
        raise ValueError(
            f"model input dim {model.input_dim} does not match {args.pipeline} "
            f"pipeline on length-{n} series (expected {expected})"
        )
    report = evaluate_imputation(model, test, args.pipeline, args.noise_rate, args.runs, args.seed)
    os.makedirs(args.out_dir, exist_ok=True)
    params = {
        "model": args.model, "test": args.test, "pipeline": args.pipeline,
        "noise_rate": args.noise_rate, "runs": args.runs, "seed": args.seed,
    }
    _write_manifest(
        os.path.join(args.out_dir, "impute-eval.manifest.json"), "impute-eval", argv, params, []
    )
    print(
        f"{args.pipeline} pipeline over {args.runs} runs: "
        f"full MSE {report.full_mse:.6g}, imputation MSE {report.imputation_mse:.6g}"
    )
    lines = {
        "pipeline": report.pipeline, "runs": args.runs,
        "full_mse": report.full_mse, "imputation_mse": report.imputation_mse,
    }
    for k, run in enumerate(report.runs):
        lines[f"run_{k}_full_mse"] = run.full_mse
        lines[f"run_{k}_imputation_mse"] = run.imputation_mse
    _machine_lines(lines)
    return 0


def _cmd_classify(args, argv) -> int:
    name = Path(args.train).stem
    dataset = load_dataset(args.train, args.test, name=name)
    grid = SelectionGrid(sizes=args.sizes, quantiles=args.quantiles, penalties=args.penalties)
    mode = RescaleMode(args.rescale)
    result = model_select(dataset, grid, seed=args.seed, mode=mode)
    test_error = evaluate(result.model, dataset, result.size, result.quantiles, mode)
    os.makedirs(args.out_dir, exist_ok=True)
    params = {
        "train": args.train, "test": args.test, "sizes": list(args.sizes),
        "quantiles": list(args.quantiles), "penalties": list(args.penalties),
        "rescale": args.rescale, "seed": args.seed,
    }
    _write_manifest(
        os.path.join(args.out_dir, "classify.manifest.json"), "classify", argv, params, []
    )
    print(
        f"dataset {name}: chose S={result.size}, Q={result.quantiles}, "
        f"C={result.penalty:g} (CV error {result.cv_error:.6g}); "
        f"test error {test_error:.6g}"
    )
    _machine_lines({
        "dataset": name, "size": result.size, "quantiles": result.quantiles,
        "penalty": result.penalty, "cv_error": result.cv_error, "test_error": test_error,
    })
    return 0


def _cmd_baseline(args, argv) -> int:
    name = Path(args.train).stem
    dataset = load_dataset(args.train, args.test, name=name)
    error = baseline_1nn(dataset, dataset)
    os.makedirs(args.out_dir, exist_ok=True)
    params = {"train": args.train, "test": args.test}
    _write_manifest(
        os.path.join(args.out_dir, "baseline.manifest.json"), "baseline", argv, params, []
    )
    print(f"dataset {name}: 1NN-Euclidean test error {error:.6g}")
    _machine_lines({"dataset": name, "error": error})
    return 0


def _cmd_synth(args, argv) -> int:
    dataset = gen_synthetic(args.family, args.count, args.length, args.seed)
    write_ucr(dataset.train, args.out)
    params = {
        "family": args.family, "count": args.count, "length": args.length,
        "seed": args.seed, "out": args.out,
    }
    _write_manifest(f"{args.out}.manifest.json", "synth", argv, params, [args.out])
    print(f"wrote {args.count} {args.family} series of length {args.length} to {args.out}")
    _machine_lines({
        "family": args.family, "count": args.count, "length": args.length, "seed": args.seed,
    })
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="tsimg", description=__doc__)
    parser.add_argument("--version", action="version", version=f"tsimg {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("encode", help="encode series files as field-matrix CSVs")
    p.add_argument("--input", required=True)
    p.add_argument("--encoding", required=True, choices=("gasf", "gadf", "mtf", "compound"))
    p.add_argument("--rescale", required=True, choices=("unit", "symmetric"),
                   help="value range before the polar map (ignored by mtf, which is rank-based)")
    p.add_argument("--paa", type=int, default=None, help="smooth to this many segments")
    p.add_argument("--image-size", type=int, default=None, help="alias for the output size")
    p.add_argument("--quantiles", type=int, default=8, help="bin count for mtf/compound")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--png", action="store_true", help="also render PNGs")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="reconstruct a series from a unit-mode GASF CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("impute-train", help="train a denoising autoencoder")
    p.add_argument("--train", required=True, action="append",
                   help="training series file (repeatable)")
    p.add_argument("--pipeline", required=True, choices=("gasf", "raw"))
    p.add_argument("--noise-rate", type=float, default=DEFAULT_NOISE_RATE)
    p.add_argument("--hidden", type=int, default=DEFAULT_HIDDEN)
    p.add_argument("--batch", type=int, default=20)
    p.add_argument("--lr", type=float, default=0.1)
    p.add_argument("--tol", type=float, default=None,
                   help="stopping tolerance (default 1e-3 for gasf, 1e-5 for raw)")
    p.add_argument("--max-epochs", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--common-length", type=int, default=None,
                   help="smooth every series to this length before pooling")
    p.add_argument("--model-out", required=True)
    p.set_defaults(func=_cmd_impute_train)

    p = sub.add_parser("impute-eval", help="score a trained model over seeded corruption runs")
    p.add_argument("--model", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--pipeline", required=True, choices=("gasf", "raw"))
    p.add_argument("--noise-rate", type=float, default=DEFAULT_NOISE_RATE)
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=_cmd_impute_eval)

    p = sub.add_parser("classify", help="grid model selection + test error")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--sizes", type=_parse_int_list, default=DEFAULT_SIZES)
    p.add_argument("--quantiles", type=_parse_int_list, default=DEFAULT_QUANTILES)
    p.add_argument("--penalties", type=_parse_penalties, default=DEFAULT_PENALTIES,
                   help="comma list or decade range like 1e-4..1e4")
    p.add_argument("--rescale", choices=("unit", "symmetric"), default="symmetric")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("baseline", help="1NN-Euclidean error on raw values")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=_cmd_baseline)

    p = sub.add_parser("synth", help="generate a synthetic dataset file")
    p.add_argument("--family", required=True, choices=("sin2", "cbf"))
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_synth)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 1
        return 0 if code == 0 else 1
    try:
        return args.func(args, argv)
    except IoFailureError as exc:
        print(f"tsimg: error: {exc}", file=sys.stderr)
        return 2
    except (TsimgError, ValueError) as exc:
        print(f"tsimg: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
