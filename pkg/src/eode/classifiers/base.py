from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from ..data import DataError, Dataset, FoldSet, stratified_kfold


class ClassifierKind(enum.Enum):
    # Declaration order doubles as the tie-break order for classifier selection.
    DISCR = "discr"
    TREE = "tree"
    KNN = "knn"
    MLP = "mlp"
    SVM = "svm"
    NAIVE_BAYES = "naive_bayes"

    @classmethod
    def parse(cls, text: str) -> "ClassifierKind":
        key = text.strip().lower().replace("-", "_")
        aliases = {"dt": "tree", "ann": "mlp", "nb": "naive_bayes", "naivebayes": "naive_bayes"}
        key = aliases.get(key, key)
        for kind in cls:
            if kind.value == key or kind.name.lower() == key:
                return kind
        raise ValueError(f"unknown classifier kind {text!r}")

    @property
    def order(self) -> int:
        return list(ClassifierKind).index(self)


ALL_KINDS = tuple(ClassifierKind)


@dataclass(frozen=True)
class ClassifierConfig:
    knn_k: int = 3
    mlp_hidden: int = 10
    mlp_epochs: int = 200
    mlp_learning_rate: float = 0.5
    svm_kernel: str = "rbf"
    svm_gamma: float | str = "auto"
    svm_c: float = 1.0
    svm_iter_limit: int = 50000
    svm_tol: float = 1e-3
    nb_bandwidth_rule: str = "silverman"
    tree_min_leaf: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.knn_k < 1:
            raise ValueError("knn_k must be >= 1")
        if self.mlp_epochs < 1:
            raise ValueError("mlp_epochs must be >= 1")
        if self.mlp_hidden < 1:
            raise ValueError("mlp_hidden must be >= 1")
        if self.svm_iter_limit < 1:
            raise ValueError("svm_iter_limit must be >= 1")
        if self.svm_kernel != "rbf":
            raise ValueError("only the rbf kernel is supported")
        if self.nb_bandwidth_rule != "silverman":
            raise ValueError("only the silverman bandwidth rule is supported")
        if self.tree_min_leaf < 1:
            raise ValueError("tree_min_leaf must be >= 1")
        if not (self.svm_gamma == "auto" or float(self.svm_gamma) > 0):
            raise ValueError("svm_gamma must be positive or 'auto'")

    def with_seed(self, seed: int) -> "ClassifierConfig":
        return replace(self, seed=int(seed))


class ConstantEstimator:
    """Fallback used whenever the training rows carry a single class."""

    def __init__(self, label: int = 0):
        self.label = int(label)

    def fit(self, X, y):
        self.label = int(y[0])
        return self

    def predict(self, X):
        return np.full(X.shape[0], self.label, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class TrainedModel:
    kind: ClassifierKind
    estimator: object
    classes_seen: tuple[int, ...]
    n_features: int
    train_seed: int

    @property
    def is_constant(self) -> bool:
        return isinstance(self.estimator, ConstantEstimator)

    def predict(self, samples) -> np.ndarray:
        return predict(self, samples)


def _make_estimator(kind: ClassifierKind, cfg: ClassifierConfig):
    from .discriminant import DiagLinearDiscriminant
    from .knn import KNearestNeighbors
    from .mlp import MLPClassifier
    from .naive_bayes import KernelNaiveBayes
    from .svm import RBFSupportVectorMachine
    from .tree import CARTClassifier

    if kind is ClassifierKind.DISCR:
        return DiagLinearDiscriminant()
    if kind is ClassifierKind.TREE:
        return CARTClassifier(min_leaf=cfg.tree_min_leaf)
    if kind is ClassifierKind.KNN:
        return KNearestNeighbors(k=cfg.knn_k)
    if kind is ClassifierKind.MLP:
        return MLPClassifier(
            hidden=cfg.mlp_hidden, epochs=cfg.mlp_epochs,
            learning_rate=cfg.mlp_learning_rate, seed=cfg.seed,
        )
    if kind is ClassifierKind.SVM:
        return RBFSupportVectorMachine(
            gamma=cfg.svm_gamma, C=cfg.svm_c, iter_limit=cfg.svm_iter_limit, tol=cfg.svm_tol,
        )
    if kind is ClassifierKind.NAIVE_BAYES:
        return KernelNaiveBayes()
    raise ValueError(f"unhandled classifier kind {kind}")


def fit_arrays(kind: ClassifierKind, X, y, cfg: ClassifierConfig | None = None) -> TrainedModel:
    cfg = cfg or ClassifierConfig()
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise DataError(f"bad training shapes {X.shape} / {y.shape}")
    if X.shape[0] < 1:
        raise DataError("cannot fit on zero rows")
    classes = np.unique(y)
    if classes.size == 1:
        estimator = ConstantEstimator().fit(X, y)
    else:
        estimator = _make_estimator(kind, cfg).fit(X, y)
    return TrainedModel(kind, estimator, tuple(int(c) for c in classes), X.shape[1], cfg.seed)


def fit(kind: ClassifierKind, ds: Dataset, cfg: ClassifierConfig | None = None) -> TrainedModel:
    """Train one base classifier; single-class data yields a constant predictor."""
    return fit_arrays(kind, ds.samples, ds.labels, cfg)


def predict(model: TrainedModel, samples) -> np.ndarray:
    X = np.asarray(samples, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise DataError(
            f"model was trained on {model.n_features} features, got input of shape {X.shape}"
        )
    return model.estimator.predict(X)


def accuracy(predicted, truth) -> float:
    predicted = np.asarray(predicted)
    truth = np.asarray(truth)
    if truth.size == 0:
        raise ValueError("accuracy of an empty label vector is undefined")
    return float(np.count_nonzero(predicted == truth)) / truth.size


def cv_accuracy(
    kind: ClassifierKind,
    ds: Dataset,
    k: int = 5,
    cfg: ClassifierConfig | None = None,
    seed: int = 0,
    folds: FoldSet | None = None,
) -> float:
    """Pooled k-fold accuracy: correct predictions over all folds divided by n."""
    if folds is None:
        folds = stratified_kfold(ds, k, seed)
    correct = 0
    for i in range(folds.k):
        train_rows, test_rows = folds.train_test(i)
        model = fit_arrays(kind, ds.samples[train_rows], ds.labels[train_rows], cfg)
        correct += int(np.count_nonzero(predict(model, ds.samples[test_rows]) == ds.labels[test_rows]))
    return correct / ds.n
