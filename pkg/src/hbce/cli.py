"""Command-line entry point: ``hbce <subcommand> [flags]``.

Every subcommand writes its outputs plus one ``manifest.txt`` (key=value
lines) into its output directory. Exit status is 0 on success, 2 on a usage
or configuration error and 1 on a runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, explain, pnm
from . import synthdata as sd
from .engine import (
    CheckpointError,
    ModelConfig,
    ShapeMismatchError,
    TrainConfig,
    TrainingDivergedError,
    load_checkpoint,
    predict,
    train,
)
from .loss import LossConfig, hbce
from .metrics import (
    DegenerateTestError,
    auroc_per_label,
    mean_auroc,
    paired_t_test,
    violation_rate,
    weighted_auroc,
)
from .penalty import PenaltyTable, estimate_data_driven, fixed_penalties
from .taxonomy import TaxonomyError, default_taxonomy, load_taxonomy
from .uncertainty import mc_predict, summary_csv

SWEEP_LAMBDAS = (0.3, 0.5, 0.7, 1.0)
SWEEP_PENALTIES = ("fixed", "data-driven")
CHECKPOINT_NAME = "model.ckpt"


class UsageError(Exception):
    """Bad flags or configuration values; maps to exit status 2."""


# -- shared helpers -------------------------------------------------------

def _taxonomy(ref):
    """Load a taxonomy file; ``default`` or a missing ``default.tax`` selects the shipped one."""
    path = Path(ref)
    if path.exists():
        try:
            return load_taxonomy(path)
        except TaxonomyError as exc:
            raise UsageError(f"{path}: {exc}") from None
    if ref in ("default", "default.tax"):
        return default_taxonomy()
    raise UsageError(f"taxonomy file not found: {ref}")


def _config(factory, *args, **kwargs):
    try:
        return factory(*args, **kwargs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _threads() -> int:
    raw = os.environ.get("HBCE_THREADS", "")
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"HBCE_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"HBCE_THREADS must be a positive integer, got {raw!r}")
    return n


def _floats(text: str, flag: str):
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise UsageError(f"{flag}: expected comma-separated numbers, got {text!r}") from None


def write_manifest(out_dir, subcommand: str, values: dict, started: float):
    """Write ``manifest.txt``; only ``started`` and ``duration_s`` vary between identical runs."""
    lines = [f"subcommand={subcommand}", f"version={__version__}",
             f"hbce_threads={os.environ.get('HBCE_THREADS', '1') or '1'}"]
    lines += [f"{k}={v}" for k, v in values.items()]
    stamp = datetime.fromtimestamp(started, tz=timezone.utc).isoformat(timespec="seconds")
    lines += [f"started={stamp}", f"duration_s={time.time() - started:.3f}"]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "manifest.txt").write_text("\n".join(lines) + "\n")


def _penalty_table(kind, taxonomy, labels, beta, epsilon):
    if kind == "none":
        return None
    if kind == "fixed":
        return _config(fixed_penalties, taxonomy, beta)
    return _config(estimate_data_driven, labels, taxonomy, epsilon)


def _loss_config(args, lam):
    return _config(LossConfig, lam=lam, mode=args.mode, tau=args.tau)


def _read_penalties(path, taxonomy) -> PenaltyTable:
    rows = list(csv.reader(Path(path).read_text().splitlines()))
    if not rows or rows[0] != ["parent", "child", "penalty"]:
        raise UsageError(f"{path}: expected header parent,child,penalty")
    entries = {}
    for parent, child, value in rows[1:]:
        try:
            key = (taxonomy.index(parent), taxonomy.index(child))
        except KeyError as exc:
            raise UsageError(f"{path}: {exc.args[0]}") from None
        if key not in taxonomy.edges:
            raise UsageError(f"{path}: {parent} > {child} is not a taxonomy edge")
        entries[key] = float(value)
    return PenaltyTable(entries, "file", float("nan"))


def _load_image(path, cfg: ModelConfig):
    pixels, maxval = pnm.read_pnm(path)
    if pixels.ndim != 2:
        raise UsageError(f"{path}: expected a grayscale PGM")
    if pixels.shape != (cfg.height, cfg.width):
        raise UsageError(f"{path}: image is {pixels.shape[0]}x{pixels.shape[1]}, "
                         f"model expects {cfg.height}x{cfg.width}")
    return pixels / maxval


def _label_index(ref, taxonomy) -> int:
    if ref.isdigit():
        idx = int(ref)
        if idx >= len(taxonomy):
            raise UsageError(f"label index {idx} outside 0..{len(taxonomy) - 1}")
        return idx
    try:
        return taxonomy.index(ref)
    except KeyError:
        raise UsageError(f"unknown label {ref!r}") from None


def metrics_rows(taxonomy, labels, pred, table=None, loss_cfg=None):
    """Rows of the ``eval`` CSV, in output order."""
    labels = np.asarray(labels)
    per_label = auroc_per_label(labels, pred)
    rows = [["label", "auroc", "positives", "negatives"]]
    for name, col, res in zip(taxonomy.names, labels.T, per_label):
        pos = int(col.sum())
        auc = "undefined" if res is None else f"{res.auroc:.6f}"
        rows.append([name, auc, pos, len(col) - pos])
    rows.append(["mean_auroc", f"{mean_auroc(per_label):.6f}", "", ""])
    rows.append(["weighted_auroc", f"{weighted_auroc(per_label):.6f}", "", ""])
    rows.append(["violation_rate", f"{violation_rate(pred, taxonomy):.6f}", "", ""])
    if loss_cfg is not None:
        value = hbce(labels, pred, table, loss_cfg)
        rows.append(["loss_total", f"{value.total:.6f}", "", ""])
        rows.append(["loss_bce", f"{value.bce:.6f}", "", ""])
        rows.append(["loss_penalty", f"{value.penalty_sum:.6f}", "", ""])
    return rows


def _csv_text(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def read_metrics_csv(path) -> dict:
    """Per-label AUROCs from an ``eval`` CSV; undefined labels are skipped."""
    out = {}
    rows = list(csv.reader(Path(path).read_text().splitlines()))
    if not rows or rows[0][:2] != ["label", "auroc"]:
        raise UsageError(f"{path}: not an eval metrics CSV")
    for row in rows[1:]:
        if row[2:3] == [""] or row[1] == "undefined":
            continue
        out[row[0]] = float(row[1])
    return out


# -- subcommands ----------------------------------------------------------

def cmd_gen_data(args):
    started = time.time()
    taxonomy = _taxonomy(args.taxonomy)
    cfg = _config(sd.GenConfig, taxonomy, n_samples=args.n, height=args.height, width=args.width,
                  patch_size=args.patch_size, root_prob=args.root_prob,
                  p_child_given_parent=args.p_child_given_parent,
                  p_child_given_no_parent=args.p_child_given_no_parent, signal=args.signal,
                  noise_std=args.noise_std, background=args.background, seed=args.seed)
    try:
        data = sd.generate(cfg)
    except sd.DatasetError as exc:
        raise UsageError(str(exc)) from None
    sd.save_dataset(data, args.out)
    write_manifest(args.out, "gen-data", {
        "taxonomy": args.taxonomy, "n_samples": cfg.n_samples, "height": cfg.height,
        "width": cfg.width, "patch_size": cfg.patch_size, "root_prob": cfg.root_prob,
        "p_child_given_parent": cfg.p_child_given_parent,
        "p_child_given_no_parent": cfg.p_child_given_no_parent, "signal": cfg.signal,
        "noise_std": cfg.noise_std, "background": cfg.background, "seed": cfg.seed,
        "output": args.out}, started)


def cmd_estimate_penalties(args):
    started = time.time()
    taxonomy = _taxonomy(args.taxonomy)
    if not args.epsilon > 0:
        raise UsageError(f"epsilon must be > 0, got {args.epsilon}")
    files, _, labels = sd.read_labels_csv(args.labels, taxonomy)
    if args.split is not None:
        tags = dict(r[:2] for r in csv.reader(Path(args.split).read_text().splitlines()[1:]))
        keep = [i for i, f in enumerate(files) if tags.get(f) == "train"]
        labels = labels[keep]
    table = _config(estimate_data_driven, labels, taxonomy, args.epsilon)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(table.to_csv(taxonomy))
    write_manifest(out.parent, "estimate-penalties", {
        "labels": args.labels, "split": args.split, "taxonomy": args.taxonomy,
        "epsilon": args.epsilon, "rows_used": len(labels), "output": out}, started)


def _train_flags(args):
    lam = args.lam if args.lam is not None else (0.0 if args.penalty == "none" else 0.5)
    if lam < 0:
        raise UsageError(f"lambda must be >= 0, got {lam}")
    if args.penalty == "none" and lam != 0:
        raise UsageError("--lambda needs --penalty fixed or data-driven")
    augment = _config(sd.AugmentConfig) if args.augment else None
    train_cfg = _config(TrainConfig, lr_init=args.lr, plateau_factor=args.plateau_factor,
                        plateau_patience=args.plateau_patience, early_stop_patience=args.patience,
                        batch_size=args.batch, max_epochs=args.epochs, seed=args.seed,
                        loss=_loss_config(args, lam), augment=augment)
    return lam, train_cfg


def run_training(data, taxonomy, penalty, beta, epsilon, train_cfg, model_args, out_dir):
    """Train on the ``train`` split, validate on ``val``; write checkpoint, history, penalties."""
    tr, va = data.subset("train"), data.subset("val")
    if len(tr) == 0 or len(va) == 0:
        raise UsageError("dataset needs non-empty train and val splits")
    table = _penalty_table(penalty, taxonomy, tr.labels, beta, epsilon)
    h, w = data.images.shape[1:]
    model_cfg = _config(ModelConfig, h, w, len(taxonomy), **model_args)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    model, history = train(model_cfg, tr, va, train_cfg, taxonomy, table,
                           checkpoint_path=out / CHECKPOINT_NAME)
    (out / "history.csv").write_text(history.to_csv())
    if table is not None:
        (out / "penalties.csv").write_text(table.to_csv(taxonomy))
    return model, history, table


def _model_args(args):
    return dict(conv_filters=args.conv_filters, conv_kernel=args.conv_kernel,
                dense_units=args.dense_units, dropout_rate=args.dropout)


def cmd_train(args):
    started = time.time()
    taxonomy = _taxonomy(args.taxonomy)
    lam, train_cfg = _train_flags(args)
    data = sd.load_dataset(args.data, taxonomy)
    _, history, _ = run_training(data, taxonomy, args.penalty, args.beta, args.epsilon,
                                 train_cfg, _model_args(args), args.out_dir)
    write_manifest(args.out_dir, "train", {
        "data": args.data, "taxonomy": args.taxonomy, "penalty": args.penalty,
        "beta": args.beta, "epsilon": args.epsilon, "lambda": lam, "mode": args.mode,
        "tau": args.tau, "lr": args.lr, "plateau_factor": args.plateau_factor,
        "plateau_patience": args.plateau_patience, "patience": args.patience,
        "batch": args.batch, "epochs": args.epochs, "seed": args.seed, "augment": args.augment,
        **_model_args(args), "epochs_run": len(history),
        "saved_epochs": " ".join(map(str, history.saved_epochs)),
        "checkpoint": Path(args.out_dir) / CHECKPOINT_NAME}, started)


def cmd_eval(args):
    started = time.time()
    out = Path(args.out)
    if args.compare:
        runs = [r for r in args.compare.split(",") if r]
        if len(runs) < 2:
            raise UsageError("--compare needs at least two metrics CSVs")
        rows = [["run_a", "run_b", "labels", "mean_a", "mean_b", "t", "p"]]
        tables = [read_metrics_csv(Path(r) / "metrics.csv" if Path(r).is_dir() else r) for r in runs]
        for i in range(len(runs)):
            for j in range(i + 1, len(runs)):
                shared = [k for k in tables[i] if k in tables[j]]
                a = [tables[i][k] for k in shared]
                b = [tables[j][k] for k in shared]
                try:
                    t, p = paired_t_test(a, b)
                    ts, ps = f"{t:.6f}", f"{p:.6f}"
                except DegenerateTestError:
                    ts = ps = "degenerate"
                rows.append([runs[i], runs[j], len(shared), f"{np.mean(a):.6f}",
                             f"{np.mean(b):.6f}", ts, ps])
        values = {"compare": args.compare}
    else:
        if not (args.checkpoint and args.data):
            raise UsageError("eval needs --checkpoint and --data (or --compare)")
        taxonomy = _taxonomy(args.taxonomy)
        model = load_checkpoint(args.checkpoint, expected_labels=len(taxonomy))
        data = sd.load_dataset(args.data, taxonomy).subset(args.split)
        if len(data) == 0:
            raise UsageError(f"split {args.split!r} is empty")
        table = _read_penalties(args.penalties, taxonomy) if args.penalties else None
        if table is None and args.lam:
            raise UsageError("--lambda needs --penalties")
        pred = predict(model, data.images)
        rows = metrics_rows(taxonomy, data.labels, pred, table, _loss_config(args, args.lam))
        values = {"checkpoint": args.checkpoint, "data": args.data, "split": args.split,
                  "taxonomy": args.taxonomy, "penalties": args.penalties, "lambda": args.lam,
                  "mode": args.mode, "tau": args.tau}
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(_csv_text(rows))
    write_manifest(out.parent, "eval", {**values, "output": out}, started)


def cmd_predict(args):
    started = time.time()
    if args.passes < 1:
        raise UsageError(f"passes must be >= 1, got {args.passes}")
    taxonomy = _taxonomy(args.taxonomy)
    model = load_checkpoint(args.checkpoint, expected_labels=len(taxonomy))
    image = _load_image(args.image, model.config)
    summary = mc_predict(model, image, args.passes, args.seed)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(summary_csv(summary, taxonomy.names))
    write_manifest(out.parent, "predict", {
        "checkpoint": args.checkpoint, "image": args.image, "taxonomy": args.taxonomy,
        "passes": args.passes, "seed": args.seed, "output": out}, started)


def cmd_cam(args):
    started = time.time()
    if args.bins < 2:
        raise UsageError(f"bins must be >= 2, got {args.bins}")
    if not 0 <= args.threshold <= 1:
        raise UsageError(f"threshold must lie in [0, 1], got {args.threshold}")
    taxonomy = _taxonomy(args.taxonomy)
    model = load_checkpoint(args.checkpoint, expected_labels=len(taxonomy))
    image = _load_image(args.image, model.config)
    label = _label_index(args.label, taxonomy)
    heatmap = explain.normalize_clip(explain.grad_cam(model, image, label), args.threshold)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    suffix = ".ppm" if args.color else ".pgm"
    path, side = explain.export_heatmap(heatmap, image, out_dir / f"cam{suffix}", args.bins,
                                        args.color)
    write_manifest(out_dir, "cam", {
        "checkpoint": args.checkpoint, "image": args.image, "label": taxonomy.names[label],
        "threshold": args.threshold, "bins": args.bins, "color": args.color,
        "heatmap": path, "side_by_side": side}, started)


def _sweep_cell(job):
    data_dir, taxonomy_ref, penalty, lam, args_dict, cell_dir = job
    args = argparse.Namespace(**args_dict)
    started = time.time()
    taxonomy = _taxonomy(taxonomy_ref)
    data = sd.load_dataset(data_dir, taxonomy)
    train_cfg = _config(TrainConfig, lr_init=args.lr, plateau_factor=args.plateau_factor,
                        plateau_patience=args.plateau_patience,
                        early_stop_patience=args.patience, batch_size=args.batch,
                        max_epochs=args.epochs, seed=args.seed,
                        loss=_loss_config(args, lam),
                        augment=_config(sd.AugmentConfig) if args.augment else None)
    model, history, _ = run_training(data, taxonomy, penalty, args.beta, args.epsilon,
                                     train_cfg, _model_args(args), cell_dir)
    test = data.subset("test")
    per_label = auroc_per_label(test.labels, predict(model, test.images))
    write_manifest(cell_dir, "sweep-cell", {
        "data": data_dir, "penalty": penalty, "lambda": lam, "beta": args.beta,
        "epsilon": args.epsilon, "mode": args.mode, "seed": args.seed,
        "epochs_run": len(history)}, started)
    return per_label


def cmd_sweep(args):
    started = time.time()
    taxonomy = _taxonomy(args.taxonomy)
    lambdas = _floats(args.lambdas, "--lambdas")
    penalties = tuple(p for p in args.penalties.split(",") if p)
    bad = [p for p in penalties if p not in SWEEP_PENALTIES]
    if bad or not penalties or not lambdas:
        raise UsageError(f"--penalties must list fixed and/or data-driven, got {args.penalties!r}")
    _config(LossConfig, lam=0.0, mode=args.mode, tau=args.tau)
    sd.load_dataset(args.data, taxonomy)
    out = Path(args.out_dir)
    jobs = [(args.data, args.taxonomy, p, lam, vars(args).copy(), out / f"{p}_{lam:g}")
            for p in penalties for lam in lambdas]
    for job in jobs:
        job[4].pop("func", None)
    threads = _threads()
    if threads > 1:
        with ProcessPoolExecutor(threads) as pool:
            results = list(pool.map(_sweep_cell, jobs))
    else:
        results = [_sweep_cell(job) for job in jobs]
    rows = [["penalty", "lambda", *taxonomy.names, "mean"]]
    for (_, _, p, lam, _, _), per_label in zip(jobs, results):
        cells = ["undefined" if r is None else f"{r.auroc:.6f}" for r in per_label]
        rows.append([p, f"{lam:g}", *cells, f"{mean_auroc(per_label):.6f}"])
    out.mkdir(parents=True, exist_ok=True)
    (out / "sweep.csv").write_text(_csv_text(rows))
    write_manifest(out, "sweep", {
        "data": args.data, "taxonomy": args.taxonomy, "penalties": ",".join(penalties),
        "lambdas": ",".join(f"{v:g}" for v in lambdas), "beta": args.beta,
        "epsilon": args.epsilon, "mode": args.mode, "tau": args.tau, "seed": args.seed,
        "epochs": args.epochs, "output": out / "sweep.csv"}, started)


# -- argument parsing -----------------------------------------------------

def _add_loss_flags(p):
    p.add_argument("--mode", choices=("hard", "soft"), default="hard")
    p.add_argument("--tau", type=float, default=0.05)


def _add_train_flags(p):
    p.add_argument("--data", required=True, help="dataset directory from gen-data")
    p.add_argument("--taxonomy", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--epsilon", type=float, default=1.0)
    _add_loss_flags(p)
    p.add_argument("--lr", type=float, default=1e-4)
    p.add_argument("--plateau-factor", type=float, default=0.9)
    p.add_argument("--plateau-patience", type=int, default=1)
    p.add_argument("--patience", type=int, default=3, help="early-stopping patience in epochs")
    p.add_argument("--batch", type=int, default=16)
    p.add_argument("--epochs", type=int, default=30)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--augment", action="store_true", help="flips, brightness and contrast jitter")
    p.add_argument("--conv-filters", type=int, default=8)
    p.add_argument("--conv-kernel", type=int, default=3)
    p.add_argument("--dense-units", type=int, default=32)
    p.add_argument("--dropout", type=float, default=0.5)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hbce", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"hbce {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="generate a synthetic dataset")
    p.add_argument("--taxonomy", required=True, help="taxonomy file, or 'default'")
    p.add_argument("--n", type=int, default=2600)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", required=True)
    p.add_argument("--height", type=int, default=24)
    p.add_argument("--width", type=int, default=24)
    p.add_argument("--patch-size", type=int, default=4)
    p.add_argument("--root-prob", type=float, default=0.5)
    p.add_argument("--p-child-given-parent", type=float, default=0.5)
    p.add_argument("--p-child-given-no-parent", type=float, default=0.0)
    p.add_argument("--signal", type=float, default=0.8)
    p.add_argument("--noise-std", type=float, default=0.02)
    p.add_argument("--background", type=float, default=0.05)
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("estimate-penalties", help="data-driven penalty table from labels")
    p.add_argument("--labels", required=True)
    p.add_argument("--taxonomy", required=True)
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--split", help="split.csv; when given only train rows are counted")
    p.add_argument("--out", default="penalties.csv")
    p.set_defaults(func=cmd_estimate_penalties)

    p = sub.add_parser("train", help="train the toy classifier")
    _add_train_flags(p)
    p.add_argument("--penalty", choices=("none", "fixed", "data-driven"), default="none")
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="scale factor (default 0 without a penalty, else 0.5)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="per-label AUROC and summary metrics")
    p.add_argument("--checkpoint")
    p.add_argument("--data")
    p.add_argument("--taxonomy", default="default")
    p.add_argument("--split", default="test")
    p.add_argument("--penalties", help="penalty CSV used for the loss footer rows")
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    _add_loss_flags(p)
    p.add_argument("--compare", help="comma-separated metrics CSVs or run directories")
    p.add_argument("--out", default="metrics.csv")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("predict", help="Monte Carlo dropout mean/std for one image")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--image", required=True)
    p.add_argument("--taxonomy", default="default")
    p.add_argument("--passes", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="prediction.csv")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("cam", help="Grad-CAM heatmap for one image and label")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--image", required=True)
    p.add_argument("--label", required=True, help="label name or index")
    p.add_argument("--taxonomy", default="default")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--bins", type=int, default=5)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--color", action="store_true", help="write a PPM with the 5-colour ramp")
    p.set_defaults(func=cmd_cam)

    p = sub.add_parser("sweep", help="penalty type x lambda grid in one CSV")
    _add_train_flags(p)
    p.add_argument("--penalties", default=",".join(SWEEP_PENALTIES))
    p.add_argument("--lambdas", default=",".join(f"{v:g}" for v in SWEEP_LAMBDAS))
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _threads()
        args.func(args)
    except UsageError as exc:
        print(f"hbce {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, sd.DatasetError, pnm.PNMError, CheckpointError, ShapeMismatchError,
            TrainingDivergedError, TaxonomyError) as exc:
        print(f"hbce {args.command}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
