"""Diverse ensemble: cluster-wise model pool, pre-filter, GWO subset search, plurality vote."""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import seeds
from .classifiers import (
    ALL_KINDS,
    ClassifierConfig,
    ClassifierKind,
    TrainedModel,
    fit_arrays,
    model_from_dict,
    model_to_dict,
    predict,
)
from .clustering import ClusterSet, choose_K, generate_subspaces
from .data import DataError, Dataset, apply_mask, stratified_kfold
from .feature_selection import FeatureSelectionResult, FsObjectiveParams, select_features
from .gwo import GwoParams, GwoResult, optimize

MIN_POOL_AFTER_FILTER = 3


@dataclass(frozen=True)
class EnsembleObjectiveParams:
    alpha: float = 0.9
    beta: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be non-negative")
        if abs(self.alpha + self.beta - 1.0) > 1e-12:
            raise ValueError(f"alpha + beta must equal 1, got {self.alpha + self.beta}")


@dataclass(eq=False)
class PoolEntry:
    model: TrainedModel
    cluster_id: int
    cluster_k: int
    cluster_index: int
    fold: int = -1
    validation_accuracy: float | None = None
    validation_predictions: np.ndarray | None = field(default=None, repr=False)

    @property
    def kind(self) -> ClassifierKind:
        return self.model.kind


@dataclass
class ModelPool:
    entries: list[PoolEntry]

    def __len__(self):
        return len(self.entries)

    @property
    def accuracies(self) -> np.ndarray:
        return np.array([e.validation_accuracy for e in self.entries], dtype=float)


def plurality_vote(predictions, n_classes: int | None = None) -> np.ndarray:
    """Most frequent label per column of a (models x samples) matrix; ties go to the lowest id."""
    P = np.atleast_2d(np.asarray(predictions, dtype=np.int64))
    if P.shape[0] < 1:
        raise ValueError("plurality_vote needs at least one model")
    if n_classes is None:
        n_classes = int(P.max()) + 1 if P.size else 1
    counts = np.zeros((n_classes, P.shape[1]), dtype=np.int64)
    cols = np.broadcast_to(np.arange(P.shape[1]), P.shape)
    np.add.at(counts, (P, cols), 1)
    return np.argmax(counts, axis=0)


def _accuracy(pred, truth) -> float:
    return float(np.count_nonzero(pred == truth)) / truth.size


def build_model_pool(ds: Dataset, clusters: ClusterSet, cfg: ClassifierConfig | None = None,
                     fold: int = -1) -> ModelPool:
    """Fit every classifier kind on every cluster (``len(clusters) * 6`` entries)."""
    cfg = cfg or ClassifierConfig()
    entries = []
    for cid, rows in enumerate(clusters.clusters):
        for kind in ALL_KINDS:
            model_cfg = cfg.with_seed(seeds.derive(cfg.seed, "classifier", cid * len(ALL_KINDS) + kind.order))
            try:
                model = fit_arrays(kind, ds.samples[rows], ds.labels[rows], model_cfg)
            except Exception as exc:  # pragma: no cover - fits are total by contract
                warnings.warn(f"skipping {kind.value} on cluster {cid}: {exc}", RuntimeWarning)
                continue
            entries.append(PoolEntry(model, cid, clusters.k_of_cluster[cid],
                                     clusters.index_within_k(cid), fold))
    return ModelPool(entries)


def score_pool(pool: ModelPool, val: Dataset) -> ModelPool:
    """Cache each entry's predictions and accuracy on the validation rows."""
    for entry in pool.entries:
        entry.validation_predictions = predict(entry.model, val.samples)
        entry.validation_accuracy = _accuracy(entry.validation_predictions, val.labels)
    return pool


def prefilter_pool(pool: ModelPool, val: Dataset | None = None) -> ModelPool:
    """Keep entries strictly above the mean validation accuracy.

    When fewer than three survive, the three most accurate entries are kept
    instead (ties by pool position). Pool order is preserved.
    """
    if not pool.entries:
        raise ValueError("cannot filter an empty pool")
    if val is not None:
        score_pool(pool, val)
    acc = pool.accuracies
    keep = np.flatnonzero(acc > acc.mean())
    if keep.size < min(MIN_POOL_AFTER_FILTER, len(pool)):
        order = np.lexsort((np.arange(acc.size), -acc))
        keep = np.sort(order[:MIN_POOL_AFTER_FILTER])
    return ModelPool([pool.entries[i] for i in keep])


class EnsembleSubsetObjective:
    """f2 over selection vectors, using cached validation predictions."""

    def __init__(self, predictions: np.ndarray, truth: np.ndarray, n_classes: int,
                 params: EnsembleObjectiveParams):
        self.predictions = np.asarray(predictions, dtype=np.int64)
        self.truth = np.asarray(truth)
        self.n_classes = n_classes
        self.params = params

    @property
    def sentinel(self) -> float:
        return 1.0 + self.params.beta

    def __call__(self, selection) -> float:
        selection = np.asarray(selection).astype(bool)
        r = self.predictions.shape[0]
        if selection.shape != (r,):
            raise ValueError(f"selection length {selection.shape} does not match pool size {r}")
        if not selection.any():
            return self.sentinel
        voted = plurality_vote(self.predictions[selection], self.n_classes)
        error = 1.0 - _accuracy(voted, self.truth)
        return self.params.alpha * error + self.params.beta * int(selection.sum()) / r


def ensemble_fitness(selection, pool: ModelPool, val: Dataset, p: EnsembleObjectiveParams) -> float:
    preds = np.stack([
        e.validation_predictions if e.validation_predictions is not None else predict(e.model, val.samples)
        for e in pool.entries
    ])
    return EnsembleSubsetObjective(preds, val.labels, val.class_count, p)(selection)


@dataclass
class EnsembleClassifier:
    models: list[PoolEntry]
    feature_mask: np.ndarray
    class_count: int
    feature_names: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.models:
            raise ValueError("an ensemble needs at least one model")
        dims = {e.model.n_features for e in self.models}
        if dims != {int(np.count_nonzero(self.feature_mask))}:
            raise ValueError(f"model input dims {dims} disagree with the feature mask")

    @property
    def size(self) -> int:
        return len(self.models)

    def member_predictions(self, samples) -> np.ndarray:
        X = np.asarray(samples, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.feature_mask.size:
            raise DataError(f"expected {self.feature_mask.size} columns, got shape {X.shape}")
        Xm = X[:, self.feature_mask]
        return np.stack([predict(e.model, Xm) for e in self.models])

    def predict(self, samples) -> np.ndarray:
        return plurality_vote(self.member_predictions(samples), self.class_count)

    def manifest(self) -> dict:
        return {
            "feature_mask": [int(b) for b in self.feature_mask],
            "selected_features": [n for n, b in zip(self.feature_names, self.feature_mask) if b],
            "class_count": self.class_count,
            "models": [
                {
                    "kind": e.kind.value,
                    "fold": e.fold,
                    "cluster_k": e.cluster_k,
                    "cluster_index": e.cluster_index,
                    "validation_accuracy": e.validation_accuracy,
                }
                for e in self.models
            ],
        }

    def to_dict(self) -> dict:
        out = self.manifest()
        out["feature_names"] = list(self.feature_names)
        for record, entry in zip(out["models"], self.models):
            record["cluster_id"] = entry.cluster_id
            record["model"] = model_to_dict(entry.model)
        return out

    @classmethod
    def from_dict(cls, blob: dict) -> "EnsembleClassifier":
        models = [
            PoolEntry(model_from_dict(m["model"]), m["cluster_id"], m["cluster_k"],
                      m["cluster_index"], m["fold"], m["validation_accuracy"])
            for m in blob["models"]
        ]
        return cls(models, np.array(blob["feature_mask"], dtype=bool), blob["class_count"],
                   tuple(blob.get("feature_names", ())))

    def dumps(self) -> str:
        return json.dumps(self.to_dict())


def evaluate(ens: EnsembleClassifier, test: Dataset) -> float:
    """Plurality-vote accuracy of the whole ensemble on ``test`` (full feature space)."""
    if test.dim != ens.feature_mask.size:
        raise DataError(f"test set has {test.dim} features, ensemble expects {ens.feature_mask.size}")
    return _accuracy(ens.predict(test.samples), test.labels)


@dataclass
class FoldReport:
    fold: int
    K: int
    clusters: int
    pool_size: int
    filtered_size: int
    selected: int
    best_fitness: float
    history: list[float]
    trace: list[dict]


@dataclass
class TrainingOutcome:
    ensemble: EnsembleClassifier
    selection: FeatureSelectionResult
    folds: list[FoldReport]


def optimize_pool(pool: ModelPool, val: Dataset, gwo: GwoParams, ens: EnsembleObjectiveParams,
                  callback=None) -> tuple[list[PoolEntry], GwoResult]:
    preds = np.stack([e.validation_predictions for e in pool.entries])
    objective = EnsembleSubsetObjective(preds, val.labels, val.class_count, ens)
    result = optimize(objective, len(pool), gwo, callback=callback)
    chosen = np.flatnonzero(result.best_mask)
    if chosen.size == 0:
        # All-empty populations only; fall back to the single most accurate model.
        chosen = np.array([int(np.argmax(pool.accuracies))])
    return [pool.entries[i] for i in chosen], result


def train_eode(
    train: Dataset,
    gwo: GwoParams,
    cfg: ClassifierConfig | None = None,
    fs: FsObjectiveParams | None = None,
    ens: EnsembleObjectiveParams | None = None,
    seed: int = 0,
    selection: FeatureSelectionResult | None = None,
    n_folds: int = 5,
    callback=None,
) -> TrainingOutcome:
    """Feature selection followed by per-fold pool construction and GWO pruning.

    ``selection`` may carry a precomputed feature-selection result. The
    models chosen in each outer fold are appended to one ensemble.
    ``callback`` receives GWO trace records tagged with ``phase`` and ``fold``.
    """
    cfg = cfg or ClassifierConfig(seed=seeds.derive(seed, "classifier"))
    fs = fs or FsObjectiveParams(seed=seed)
    ens = ens or EnsembleObjectiveParams(seed=seed)

    def tagged(phase, fold):
        if callback is None:
            return None
        return lambda rec: callback({"phase": phase, "fold": fold, **rec})

    if selection is None:
        fs_gwo = GwoParams(gwo.population, gwo.iterations, gwo.threshold, seeds.derive(seed, "gwo_fs"))
        selection = select_features(train, fs_gwo, fs, cfg, callback=tagged("feature_selection", -1))
    masked = apply_mask(train, selection.mask)
    folds = stratified_kfold(masked, n_folds, seeds.derive(seed, "ensemble_folds"))
    psi: list[PoolEntry] = []
    reports = []
    for i in range(folds.k):
        train_rows, val_rows = folds.train_test(i)
        inner, val = masked.subset(train_rows), masked.subset(val_rows)
        K = choose_K(inner.n)
        clusters = generate_subspaces(inner, K, seed=seeds.derive(seed, "kmeans", i))
        fold_cfg = cfg.with_seed(seeds.derive(cfg.seed, "classifier", i))
        pool = build_model_pool(inner, clusters, fold_cfg, fold=i)
        filtered = prefilter_pool(pool, val)
        fold_gwo = GwoParams(gwo.population, gwo.iterations, gwo.threshold,
                             seeds.derive(seed, "gwo_ensemble", i))
        chosen, result = optimize_pool(filtered, val, fold_gwo, ens, callback=tagged("ensemble", i))
        psi.extend(chosen)
        reports.append(FoldReport(i, K, len(clusters), len(pool), len(filtered), len(chosen),
                                  result.best_fitness, result.history, result.trace))
    ensemble = EnsembleClassifier(psi, selection.mask.copy(), train.class_count, train.feature_names)
    return TrainingOutcome(ensemble, selection, reports)
