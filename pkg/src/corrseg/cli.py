"""Command line front end: synth, train, segment, eval, tune.

Exit codes: 0 success, 1 usage error, 2 validation or constraint error,
3 I/O error. Every command writes a run manifest (command, resolved
parameters, seed, paths, version, duration) next to its outputs; manifests
carry the only timing fields, so data outputs are byte-stable across
re-runs with the same seed.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import fileio
from .core import CorrelationMatrix, SegmentationVector, group_starts, validate_matrix
from .errors import CorrsegError, ShapeMismatchError
from .merge import MergeConfig
from .metrics import MetricReport, evaluate_pipeline
from .pipeline import PipelineConfig, segment
from .regressor import TrainingSet, load_model, save_model, train_ridge
from .scaling import ScalingParams
from .synthgen import Record, SynthSpec, generate_dataset
from .tuner import (
    GaConfig,
    PsoConfig,
    TuningCandidate,
    ga_optimize,
    pso_optimize,
    select_best,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise _UsageError(message)


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _scale_triple(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated values A,B,OMEGA")
    try:
        a, b, omega = (float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return a, b, omega


def _write_manifest(
    path: Path,
    command: str,
    parameters: dict,
    seed: int | None,
    inputs: list[str | Path],
    outputs: list[str | Path],
    started: float,
) -> None:
    fileio.write_json(
        path,
        {
            "command": command,
            "version": __version__,
            "seed": seed,
            "parameters": parameters,
            "inputs": [str(p) for p in inputs],
            "outputs": [str(p) for p in outputs],
            "duration_seconds": time.time() - started,
        },
    )


def _records_from_pairs(pairs: list[tuple[np.ndarray, np.ndarray]]) -> list[Record]:
    return [
        (validate_matrix(values), SegmentationVector(bits)) for values, bits in pairs
    ]


def _print_report(label: str, report: MetricReport) -> None:
    print(
        f"{label}: mse={report.mse:.6f} mae={report.mae:.6f} "
        f"r2={report.r2:.6f} wd={report.wd * 100:.2f}% (n={report.n})"
    )


def cmd_synth(args: argparse.Namespace) -> int:
    started = time.time()
    spec = SynthSpec(
        size=args.size,
        noise_mean=args.noise_mean,
        noise_var=args.noise_var,
        groups_mean=args.groups_mean,
        groups_var=args.groups_var,
        count=args.count,
        seed=args.seed,
    )
    dataset = generate_dataset(spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    outputs: list[str | Path] = []
    for split_name, records in (
        ("train", dataset.train),
        ("validation", dataset.validation),
        ("test", dataset.test),
    ):
        path = fileio.split_path(out, split_name)
        fileio.write_dataset_split(path, [(m.values, s.bits) for m, s in records])
        outputs.append(path)
    exported = 0
    if args.export_matrices:
        for i, (matrix, _) in enumerate(dataset.test[: args.export_matrices]):
            path = out / f"matrix_{i:04d}.txt"
            fileio.write_matrix(path, matrix.values)
            outputs.append(path)
            exported += 1
    _write_manifest(
        out / "manifest.json",
        "synth",
        {
            "size": spec.size,
            "noise_mean": spec.noise_mean,
            "noise_var": spec.noise_var,
            "groups_mean": spec.groups_mean,
            "groups_var": spec.groups_var,
            "count": spec.count,
            "export_matrices": args.export_matrices,
        },
        spec.seed,
        [],
        outputs,
        started,
    )
    print(
        f"wrote {len(dataset.train)}/{len(dataset.validation)}/{len(dataset.test)} "
        f"train/validation/test records to {out}"
        + (f" and {exported} matrix files" if exported else "")
    )
    return 0


def _load_split_records(dataset_dir: str, split: str) -> list[Record]:
    pairs = fileio.read_dataset_split(fileio.split_path(dataset_dir, split))
    return _records_from_pairs(pairs)


def cmd_train(args: argparse.Namespace) -> int:
    started = time.time()
    train_pairs = fileio.read_dataset_split(fileio.split_path(args.dataset, "train"))
    for i, (values, _) in enumerate(train_pairs):
        if values.shape[0] != args.throughput:
            raise ShapeMismatchError(
                f"train record {i} is {values.shape[0]}x{values.shape[0]}, "
                f"but --throughput is {args.throughput}"
            )
    meta: dict = {"dataset": str(args.dataset)}
    source_manifest = Path(args.dataset) / "manifest.json"
    if source_manifest.exists():
        doc = fileio.read_json(source_manifest)
        if isinstance(doc, dict) and isinstance(doc.get("parameters"), dict):
            meta["source"] = doc["parameters"]
            meta["source_seed"] = doc.get("seed")
    ts = TrainingSet.from_pairs(train_pairs, split="train")
    model = train_ridge(ts, lam=args.lam, standardize=args.standardize, meta=meta)
    out = Path(args.out)
    if out.parent != Path(""):
        out.parent.mkdir(parents=True, exist_ok=True)
    save_model(model, out)
    cfg = PipelineConfig(model=model)
    _print_report("train", evaluate_pipeline(_records_from_pairs(train_pairs), cfg))
    test_records = _load_split_records(args.dataset, "test")
    if test_records:
        _print_report("test", evaluate_pipeline(test_records, cfg))
    else:
        print("test: split is empty, skipped")
    _write_manifest(
        Path(f"{out}.manifest.json"),
        "train",
        {
            "dataset": str(args.dataset),
            "throughput": args.throughput,
            "lambda": args.lam,
            "standardize": args.standardize,
        },
        None,
        [str(args.dataset)],
        [out],
        started,
    )
    print(f"model written to {out}")
    return 0


def cmd_segment(args: argparse.Namespace) -> int:
    started = time.time()
    model = load_model(args.model)
    matrix = validate_matrix(fileio.read_matrix(args.input))
    cfg = PipelineConfig(
        model=model,
        scaling=ScalingParams(*args.scale),
        merge=MergeConfig(args.threshold),
    )
    result = segment(matrix, cfg)
    out = Path(args.out)
    fileio.write_json(
        out,
        {
            "segmentation": [int(b) for b in result.segmentation.bits],
            "group_starts": [int(i) for i in group_starts(result.segmentation)],
            "probabilities": list(result.probabilities.probs),
            "size": matrix.size,
        },
    )
    outputs: list[str | Path] = [out]
    if args.emit_matrix:
        fileio.write_matrix(args.emit_matrix, result.denoised.astype(np.float64))
        outputs.append(args.emit_matrix)
    _write_manifest(
        Path(f"{out}.manifest.json"),
        "segment",
        {
            "model": str(args.model),
            "input": str(args.input),
            "scale": list(args.scale),
            "threshold": args.threshold,
            "emit_matrix": str(args.emit_matrix) if args.emit_matrix else None,
        },
        None,
        [str(args.model), str(args.input)],
        outputs,
        started,
    )
    starts = ", ".join(str(i) for i in group_starts(result.segmentation))
    print(
        f"{matrix.size}x{matrix.size} matrix -> "
        f"{result.segmentation.group_count} groups starting at [{starts}]"
    )
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    started = time.time()
    model = load_model(args.model)
    records = _load_split_records(args.dataset, "test")
    cfg = PipelineConfig(
        model=model,
        scaling=ScalingParams(*args.scale),
        merge=MergeConfig(args.threshold),
    )
    report = evaluate_pipeline(records, cfg)
    out = Path(args.out)
    fileio.write_json(out, report.as_dict())
    _write_manifest(
        Path(f"{out}.manifest.json"),
        "eval",
        {
            "model": str(args.model),
            "dataset": str(args.dataset),
            "scale": list(args.scale),
            "threshold": args.threshold,
        },
        None,
        [str(args.model), str(args.dataset)],
        [out],
        started,
    )
    _print_report("test", report)
    print(f"report written to {out}")
    return 0


def _ranking_rows(candidates: list[tuple[TuningCandidate, str]]) -> list[str]:
    header = "rank,algorithm,wd_percent,a,b,omega,threshold,throughput"
    lines = [header]
    for rank, (cand, method) in enumerate(candidates, start=1):
        lines.append(
            ",".join(
                [
                    str(rank),
                    method,
                    fileio.format_float(cand.fitness * 100.0),
                    fileio.format_float(cand.a),
                    fileio.format_float(cand.b),
                    fileio.format_float(cand.omega),
                    fileio.format_float(cand.threshold),
                    str(cand.throughput),
                ]
            )
        )
    return lines


def cmd_tune(args: argparse.Namespace) -> int:
    started = time.time()
    bank = {}
    for path in args.models:
        model = load_model(path)
        if model.throughput in bank:
            raise CorrsegError(
                f"duplicate model for throughput {model.throughput}: {path}"
            )
        bank[model.throughput] = model
    validation = _load_split_records(args.dataset, "validation")
    if args.limit is not None:
        validation = validation[: args.limit]
    ga_all: list[TuningCandidate] = []
    pso_all: list[TuningCandidate] = []
    run_seed = args.seed
    for throughput in sorted(bank):
        if args.algo in ("ga", "both"):
            cfg = GaConfig(
                epochs=args.ga_epochs,
                population=args.ga_population,
                offspring_per_epoch=args.ga_offspring,
                seed=run_seed,
            )
            ga_all.extend(ga_optimize(cfg, throughput, bank, validation))
            run_seed += 1
        if args.algo in ("pso", "both"):
            cfg = PsoConfig(
                particles=args.pso_particles,
                iterations=args.pso_iterations,
                seed=run_seed,
            )
            pso_all.extend(pso_optimize(cfg, throughput, bank, validation))
            run_seed += 1
    def rank_key(c: TuningCandidate) -> tuple:
        return (c.fitness, c.throughput, c.a, c.b, c.omega, c.threshold)

    finalists = [(c, "genetic") for c in sorted(ga_all, key=rank_key)[:5]]
    finalists += [(c, "pso") for c in sorted(pso_all, key=rank_key)[:5]]
    finalists.sort(key=lambda pair: rank_key(pair[0]))
    best = select_best(ga_all, pso_all, bank, validation)
    methods = {
        (c.a, c.b, c.omega, c.threshold, c.throughput): m for c, m in finalists
    }
    best_method = methods.get((best.a, best.b, best.omega, best.threshold, best.throughput), "")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ranking_path = out / "ranking.csv"
    ranking_path.write_text("\n".join(_ranking_rows(finalists)) + "\n")
    best_path = out / "best.json"
    fileio.write_json(
        best_path,
        {
            "algorithm": best_method,
            "a": best.a,
            "b": best.b,
            "omega": best.omega,
            "threshold": best.threshold,
            "throughput": best.throughput,
            "wd": best.fitness,
        },
    )
    _write_manifest(
        out / "manifest.json",
        "tune",
        {
            "models": [str(p) for p in args.models],
            "dataset": str(args.dataset),
            "algo": args.algo,
            "limit": args.limit,
            "ga_epochs": args.ga_epochs,
            "ga_population": args.ga_population,
            "ga_offspring": args.ga_offspring,
            "pso_particles": args.pso_particles,
            "pso_iterations": args.pso_iterations,
        },
        args.seed,
        [str(p) for p in args.models] + [str(args.dataset)],
        [ranking_path, best_path],
        started,
    )
    print("rank  algorithm  wd%      a        b        omega    th       t")
    for rank, (cand, method) in enumerate(finalists, start=1):
        print(
            f"{rank:<5d} {method:<10s} {cand.fitness * 100.0:<8.4f} "
            f"{cand.a:<8.5f} {cand.b:<8.5f} {cand.omega:<8.5f} "
            f"{cand.threshold:<8.5f} {cand.throughput}"
        )
    print(
        f"selected: {best_method or 'n/a'} wd={best.fitness * 100.0:.4f}% "
        f"a={best.a:.5f} b={best.b:.5f} omega={best.omega:.5f} "
        f"th={best.threshold:.5f} t={best.throughput}"
    )
    print(f"ranking and best candidate written to {out}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="corrseg", description=__doc__)
    parser.add_argument("--version", action="version", version=f"corrseg {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", help="generate a synthetic block-matrix dataset")
    p.add_argument("--size", type=int, required=True, help="matrix side length")
    p.add_argument("--noise-mean", type=float, required=True)
    p.add_argument("--noise-var", type=float, required=True)
    p.add_argument("--groups-mean", type=float, required=True)
    p.add_argument("--groups-var", type=float, required=True)
    p.add_argument("--count", type=int, required=True, help="total records")
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument(
        "--export-matrices",
        type=_nonneg_int,
        default=0,
        help="also write this many test-split matrices as matrix text files",
    )
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", help="fit a ridge model on a dataset's train split")
    p.add_argument("--dataset", required=True, help="dataset directory from synth")
    p.add_argument("--throughput", type=int, required=True, help="window size t")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--standardize", action="store_true")
    p.add_argument("--out", required=True, help="model file to write")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("segment", help="segment one correlation matrix file")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True, help="comma-separated matrix file")
    p.add_argument(
        "--scale",
        type=_scale_triple,
        default=(1.0, 0.0, 0.0),
        help="rescale parameters A,B,OMEGA (default identity)",
    )
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--out", required=True, help="segmentation JSON to write")
    p.add_argument("--emit-matrix", default=None, help="also write the denoised matrix")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("eval", help="score a model on a dataset's test split")
    p.add_argument("--model", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--scale", type=_scale_triple, default=(1.0, 0.0, 0.0))
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--out", required=True, help="metric report JSON to write")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("tune", help="search scaling and threshold parameters")
    p.add_argument("--models", nargs="+", required=True, help="model files, one per throughput")
    p.add_argument("--dataset", required=True)
    p.add_argument("--algo", choices=("ga", "pso", "both"), default="both")
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--limit", type=int, default=None, help="cap validation records")
    p.add_argument("--ga-epochs", type=int, default=20)
    p.add_argument("--ga-population", type=int, default=200)
    p.add_argument("--ga-offspring", type=int, default=100)
    p.add_argument("--pso-particles", type=int, default=30)
    p.add_argument("--pso-iterations", type=int, default=20)
    p.set_defaults(func=cmd_tune)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except CorrsegError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
