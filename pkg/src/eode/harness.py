"""Run orchestration: single-dataset runs, directory sweeps, reports and format conversion."""
from __future__ import annotations

import csv
import dataclasses
import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import seeds
from .classifiers import ClassifierConfig, ClassifierKind, accuracy, fit, predict
from .data import DataError, Dataset, apply_mask, load_dataset, make_dataset, save_dataset, stratified_split
from .ensemble import EnsembleObjectiveParams, evaluate, train_eode
from .feature_selection import FsObjectiveParams, select_features
from .gwo import GwoParams

log = logging.getLogger(__name__)


class ConfigError(ValueError):
    """Invalid run configuration."""


@dataclass
class RunConfig:
    datasets: list[str] = field(default_factory=list)
    test_fraction: float = 0.2
    population: int = 100
    iterations: int = 50
    threshold: float = 0.5
    fs_alpha: float = 0.9
    fs_beta: float = 0.1
    ens_alpha: float = 0.9
    ens_beta: float = 0.1
    cv_folds: int = 5
    knn_k: int = 3
    seed: int = 0
    mode: str = "eode"
    out: str | None = None

    def validate(self) -> "RunConfig":
        try:
            GwoParams(self.population, self.iterations, self.threshold, self.seed)
            FsObjectiveParams(self.fs_alpha, self.fs_beta, self.cv_folds, self.seed)
            EnsembleObjectiveParams(self.ens_alpha, self.ens_beta, self.seed)
            ClassifierConfig(knn_k=self.knn_k)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if not 0.0 < self.test_fraction < 1.0:
            raise ConfigError(f"--test-fraction must be in (0, 1), got {self.test_fraction}")
        self.single_kind()
        return self

    def single_kind(self) -> ClassifierKind | None:
        if self.mode in ("eode", "wel"):
            return None
        if self.mode.startswith("single:"):
            try:
                return ClassifierKind.parse(self.mode.split(":", 1)[1])
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        raise ConfigError(f"--mode must be eode, wel or single:<kind>, got {self.mode!r}")

    @classmethod
    def from_file(cls, path: str | Path, **overrides) -> "RunConfig":
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from None
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        raw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**raw)


@dataclass
class RunReport:
    dataset: str
    mode: str
    n: int
    dim: int
    c: int
    evaluation_classifier: str
    fnum: int
    train_accuracy: float
    test_accuracy: float
    ensemble_size: int
    seed: int
    wall_time: float
    selected_features: list[str] = field(default_factory=list)
    classifier_scores: dict[str, float] = field(default_factory=dict)
    traces: list[dict] = field(default_factory=list)
    manifest: dict = field(default_factory=dict)

    def to_dict(self, include_wall_time: bool = True) -> dict:
        out = dataclasses.asdict(self)
        if not include_wall_time:
            out.pop("wall_time")
        return out

    def summary_rows(self) -> list[tuple[str, str]]:
        return [
            ("dataset", self.dataset),
            ("mode", self.mode),
            ("samples (n)", str(self.n)),
            ("features (dim)", str(self.dim)),
            ("classes (c)", str(self.c)),
            ("evaluation classifier", self.evaluation_classifier),
            ("selected features", str(self.fnum)),
            ("ensemble size", str(self.ensemble_size)),
            ("train accuracy", f"{self.train_accuracy:.4f}"),
            ("test accuracy", f"{self.test_accuracy:.4f}"),
            ("seed", str(self.seed)),
            ("wall time (s)", f"{self.wall_time:.2f}"),
        ]


def format_table(rows, header=None) -> str:
    rows = [tuple(str(c) for c in r) for r in rows]
    if header:
        rows = [tuple(header)] + rows
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    if header:
        lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _gwo(config: RunConfig) -> GwoParams:
    return GwoParams(config.population, config.iterations, config.threshold, config.seed)


def run_dataset(ds: Dataset, config: RunConfig) -> RunReport:
    """Split, train according to ``config.mode`` and score on the held-out part."""
    config.validate()
    start = time.perf_counter()
    split = stratified_split(ds, config.test_fraction, seeds.derive(config.seed, "split"))
    train, test = split.train, split.test
    cfg = ClassifierConfig(knn_k=config.knn_k, seed=seeds.derive(config.seed, "classifier"))
    fs = FsObjectiveParams(config.fs_alpha, config.fs_beta, config.cv_folds, config.seed)
    traces: list[dict] = []
    kind = config.single_kind()
    scores: dict[str, float] = {}
    manifest: dict

    if config.mode == "eode":
        ens = EnsembleObjectiveParams(config.ens_alpha, config.ens_beta, config.seed)
        outcome = train_eode(train, _gwo(config), cfg, fs, ens, config.seed, callback=traces.append)
        model = outcome.ensemble
        selection = outcome.selection
        train_acc, test_acc = evaluate(model, train), evaluate(model, test)
        eval_kind, mask, size = selection.evaluation_classifier, selection.mask, model.size
        scores = selection.classifier_scores
        manifest = model.manifest()
        manifest["folds"] = [
            {k: v for k, v in dataclasses.asdict(f).items() if k not in ("history", "trace")}
            for f in outcome.folds
        ]
    elif config.mode == "wel":
        fs_gwo = GwoParams(config.population, config.iterations, config.threshold,
                           seeds.derive(config.seed, "gwo_fs"))
        selection = select_features(
            train, fs_gwo, fs, cfg,
            callback=lambda rec: traces.append({"phase": "feature_selection", "fold": -1, **rec}),
        )
        eval_kind, mask = selection.evaluation_classifier, selection.mask
        scores = selection.classifier_scores
        model = fit(eval_kind, apply_mask(train, mask), cfg)
        train_acc = accuracy(predict(model, train.samples[:, mask]), train.labels)
        test_acc = accuracy(predict(model, test.samples[:, mask]), test.labels)
        size = 1
        manifest = _single_manifest(eval_kind, mask, train.feature_names)
    else:
        eval_kind, mask = kind, np.ones(ds.dim, dtype=bool)
        model = fit(kind, train, cfg)
        train_acc = accuracy(predict(model, train.samples), train.labels)
        test_acc = accuracy(predict(model, test.samples), test.labels)
        size = 1
        manifest = _single_manifest(kind, mask, train.feature_names)

    return RunReport(
        dataset=ds.name,
        mode=config.mode,
        n=ds.n,
        dim=ds.dim,
        c=ds.class_count,
        evaluation_classifier=eval_kind.value,
        fnum=int(mask.sum()),
        train_accuracy=float(train_acc),
        test_accuracy=float(test_acc),
        ensemble_size=int(size),
        seed=config.seed,
        wall_time=time.perf_counter() - start,
        selected_features=[n for n, b in zip(ds.feature_names, mask) if b],
        classifier_scores=scores,
        traces=traces,
        manifest=manifest,
    )


def _single_manifest(kind, mask, names) -> dict:
    return {
        "feature_mask": [int(b) for b in mask],
        "selected_features": [n for n, b in zip(names, mask) if b],
        "models": [{"kind": kind.value}],
    }


def write_report(report: RunReport, out_dir: str | Path) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    body = report.to_dict()
    traces = body.pop("traces")
    manifest = body.pop("manifest")
    (out / "report.json").write_text(json.dumps(body, indent=2, sort_keys=True) + "\n")
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    (out / "biomarkers.json").write_text(json.dumps(report.selected_features, indent=2) + "\n")
    (out / "report.txt").write_text(format_table(report.summary_rows()))
    with (out / "traces.csv").open("w", newline="") as fh:
        writer = csv.DictWriter(fh, ["phase", "fold", "iteration", "best_fitness", "bits_set"],
                                lineterminator="\n")
        writer.writeheader()
        writer.writerows(traces)
    return out


def run(config: RunConfig, path: str | Path | None = None) -> RunReport:
    """Load one dataset (``path`` or the first configured one), run it and write outputs."""
    config.validate()
    path = path or (config.datasets[0] if config.datasets else None)
    if path is None:
        raise ConfigError("no dataset given")
    ds = load_dataset(path)
    report = run_dataset(ds, config)
    if config.out:
        write_report(report, config.out)
    return report


@dataclass
class BenchSummary:
    reports: list[RunReport]
    errors: list[dict]
    aggregate: dict

    def to_dict(self, include_wall_time: bool = True) -> dict:
        return {
            "reports": [
                {k: v for k, v in r.to_dict(include_wall_time).items() if k not in ("traces", "manifest")}
                for r in self.reports
            ],
            "errors": self.errors,
            "aggregate": self.aggregate,
        }

    def table(self) -> str:
        header = ("dataset", "n", "dim", "c", "classifier", "fnum", "|ensemble|", "train acc", "test acc")
        rows = [
            (r.dataset, r.n, r.dim, r.c, r.evaluation_classifier, r.fnum, r.ensemble_size,
             f"{r.train_accuracy:.4f}", f"{r.test_accuracy:.4f}")
            for r in self.reports
        ]
        if self.reports:
            a = self.aggregate
            rows.append(("MEAN", "", "", "", "", f"{a['mean_fnum']:.1f}", f"{a['mean_ensemble_size']:.1f}",
                         f"{a['mean_train_accuracy']:.4f}", f"{a['mean_test_accuracy']:.4f}"))
        text = format_table(rows, header) if rows else "no datasets completed\n"
        if self.errors:
            text += "errors:\n" + "".join(f"  {e['dataset']}: {e['error']}\n" for e in self.errors)
        return text


def bench(directory: str | Path, config: RunConfig) -> BenchSummary:
    """Run every CSV in ``directory``; failures are recorded per dataset, not raised."""
    config.validate()
    directory = Path(directory)
    if not directory.is_dir():
        raise DataError(f"no such directory: {directory}")
    reports, errors = [], []
    for path in sorted(directory.glob("*.csv")):
        try:
            ds = load_dataset(path)
            report = run_dataset(ds, config)
        except (DataError, ValueError) as exc:
            log.warning("skipping %s: %s", path.name, exc)
            errors.append({"dataset": path.stem, "error": str(exc)})
            continue
        reports.append(report)
        if config.out:
            write_report(report, Path(config.out) / path.stem)
    aggregate = {}
    if reports:
        aggregate = {
            "datasets": len(reports),
            "mean_test_accuracy": float(np.mean([r.test_accuracy for r in reports])),
            "mean_train_accuracy": float(np.mean([r.train_accuracy for r in reports])),
            "mean_fnum": float(np.mean([r.fnum for r in reports])),
            "mean_ensemble_size": float(np.mean([r.ensemble_size for r in reports])),
        }
    summary = BenchSummary(reports, errors, aggregate)
    if config.out:
        out = Path(config.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "bench.json").write_text(json.dumps(summary.to_dict(), indent=2, sort_keys=True) + "\n")
        (out / "bench.txt").write_text(summary.table())
    return summary


def convert(source: str | Path, dest: str | Path, layout: str = "samples", delimiter: str | None = None,
            label_column: str | None = None, x_key: str = "X", y_key: str = "y") -> Dataset:
    """Convert a fixture into the CSV contract (features..., label).

    Supported inputs:

    * ``.npz`` with arrays ``x_key``, ``y_key`` and optional ``feature_names``;
    * ``.mat`` (MATLAB) with variables ``x_key`` and ``y_key``;
    * delimited text, either ``layout="samples"`` (one row per sample, header
      row, label in ``label_column`` or the last column) or
      ``layout="features"`` (one row per feature: the first row holds sample
      ids, the second row class labels, then ``name, values...`` rows).

    Labels of any type are re-encoded to integers by first appearance.
    """
    source = Path(source)
    if not source.is_file():
        raise DataError(f"no such file: {source}")
    suffix = source.suffix.lower()
    try:
        X, y, names = _read_source(source, suffix, layout, delimiter, label_column, x_key, y_key)
    except KeyError as exc:
        raise DataError(f"{source}: missing array {exc}") from None
    ds = make_dataset(X, y, names, name=Path(dest).stem)
    save_dataset(ds, dest)
    return ds


def _read_source(source, suffix, layout, delimiter, label_column, x_key, y_key):
    if suffix == ".npz":
        with np.load(source, allow_pickle=False) as z:
            X, y = z[x_key], z[y_key].ravel()
            names = [str(n) for n in z["feature_names"]] if "feature_names" in z else None
    elif suffix == ".mat":
        from scipy.io import loadmat

        m = loadmat(source)
        X, y, names = np.asarray(m[x_key], dtype=float), np.asarray(m[y_key]).ravel(), None
    else:
        X, y, names = _read_delimited(source, layout, delimiter, label_column)
    return X, y, names


def _read_delimited(path: Path, layout: str, delimiter, label_column):
    with path.open(newline="", encoding="utf-8") as fh:
        sample = fh.read(4096)
        fh.seek(0)
        if delimiter is None:
            delimiter = "\t" if "\t" in sample else ","
        rows = [r for r in csv.reader(fh, delimiter=delimiter) if r and any(c.strip() for c in r)]
    if len(rows) < 2:
        raise DataError(f"{path} has too few rows")
    try:
        if layout == "samples":
            header = [h.strip() for h in rows[0]]
            col = header.index(label_column) if label_column else len(header) - 1
            names = [h for i, h in enumerate(header) if i != col]
            X = np.array([[float(v) for i, v in enumerate(r) if i != col] for r in rows[1:]])
            y = [r[col].strip() for r in rows[1:]]
        elif layout == "features":
            y = [v.strip() for v in rows[1][1:]]
            names = [r[0].strip() for r in rows[2:]]
            X = np.array([[float(v) for v in r[1:]] for r in rows[2:]]).T
        else:
            raise DataError(f"unknown layout {layout!r}")
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None
    y = [_maybe_number(v) for v in y]
    return X, y, names


def _maybe_number(text: str):
    try:
        value = float(text)
    except ValueError:
        return text
    return int(value) if value.is_integer() else value
