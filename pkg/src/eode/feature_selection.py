"""Wrapper feature selection: pick an evaluation classifier, then search masks with GWO."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import seeds
from .classifiers import ALL_KINDS, ClassifierConfig, ClassifierKind, cv_accuracy
from .data import Dataset, FoldSet, apply_mask, stratified_kfold
from .gwo import GwoParams, optimize


@dataclass(frozen=True)
class FsObjectiveParams:
    alpha: float = 0.9
    beta: float = 0.1
    cv_folds: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be non-negative")
        if abs(self.alpha + self.beta - 1.0) > 1e-12:
            raise ValueError(f"alpha + beta must equal 1, got {self.alpha + self.beta}")
        if self.cv_folds < 2:
            raise ValueError("cv_folds must be >= 2")


@dataclass
class FeatureSelectionResult:
    mask: np.ndarray
    evaluation_classifier: ClassifierKind
    fitness: float
    history: list[float]
    classifier_scores: dict[str, float] = field(default_factory=dict)
    trace: list[dict] = field(default_factory=list)

    @property
    def fnum(self) -> int:
        return int(np.count_nonzero(self.mask))

    def selected_features(self, feature_names) -> list[str]:
        return [n for n, keep in zip(feature_names, self.mask) if keep]


def weighted_objective(error: float, size: int, total: int, alpha: float, beta: float) -> float:
    """alpha * error + beta * size / total."""
    return alpha * error + beta * size / total


def select_evaluation_classifier(
    ds: Dataset, cfg: ClassifierConfig | None = None, seed: int = 0, k: int = 5,
    scores: dict | None = None,
) -> ClassifierKind:
    """Kind with the best k-fold CV accuracy; ties go to the earlier kind in enum order."""
    cfg = cfg or ClassifierConfig()
    folds = stratified_kfold(ds, k, seed)
    best_kind, best_acc = None, -1.0
    for kind in ALL_KINDS:
        acc = cv_accuracy(kind, ds, k, cfg, seed, folds=folds)
        if scores is not None:
            scores[kind.value] = acc
        if acc > best_acc:
            best_kind, best_acc = kind, acc
    return best_kind


class FeatureSubsetObjective:
    """Memoised f1 for one dataset: fold assignment is fixed at construction."""

    def __init__(self, ds: Dataset, kind: ClassifierKind, params: FsObjectiveParams,
                 cfg: ClassifierConfig | None = None, folds: FoldSet | None = None):
        self.ds = ds
        self.kind = kind
        self.params = params
        self.cfg = cfg or ClassifierConfig()
        self.folds = folds or stratified_kfold(ds, params.cv_folds, params.seed)
        self.cache: dict[bytes, float] = {}

    @property
    def sentinel(self) -> float:
        return 1.0 + self.params.beta

    def __call__(self, mask) -> float:
        mask = np.asarray(mask).astype(bool)
        if mask.shape != (self.ds.dim,):
            raise ValueError(f"mask length {mask.shape} does not match dim {self.ds.dim}")
        if not mask.any():
            return self.sentinel
        key = np.packbits(mask).tobytes()
        value = self.cache.get(key)
        if value is None:
            acc = cv_accuracy(self.kind, apply_mask(self.ds, mask), cfg=self.cfg, folds=self.folds)
            value = weighted_objective(1.0 - acc, int(mask.sum()), self.ds.dim,
                                       self.params.alpha, self.params.beta)
            self.cache.setdefault(key, value)
        return value


def fs_fitness(mask, ds: Dataset, kind: ClassifierKind, p: FsObjectiveParams,
               cfg: ClassifierConfig | None = None) -> float:
    return FeatureSubsetObjective(ds, kind, p, cfg)(mask)


def select_features(
    ds: Dataset,
    gwo: GwoParams,
    fs: FsObjectiveParams | None = None,
    cfg: ClassifierConfig | None = None,
    callback=None,
) -> FeatureSelectionResult:
    fs = fs or FsObjectiveParams()
    cfg = cfg or ClassifierConfig()
    scores: dict[str, float] = {}
    kind = select_evaluation_classifier(
        ds, cfg, seeds.derive(fs.seed, "preselect"), fs.cv_folds, scores=scores
    )
    objective = FeatureSubsetObjective(
        ds, kind, fs, cfg, stratified_kfold(ds, fs.cv_folds, seeds.derive(fs.seed, "fs_folds"))
    )
    result = optimize(objective, ds.dim, gwo, callback=callback)
    mask = result.best_mask
    if not mask.any():
        # Only reachable if every evaluated wolf decoded to the empty mask.
        mask = np.zeros(ds.dim, dtype=bool)
        mask[int(np.argmax(result.best_position))] = True
    return FeatureSelectionResult(mask, kind, objective(mask), result.history, scores, result.trace)
