"""Grey-wolf wrapper feature selection with a k-means-diversified, GWO-pruned voting ensemble."""
from .classifiers import ClassifierConfig, ClassifierKind
from .data import Dataset, apply_mask, load_dataset, make_dataset, stratified_kfold, stratified_split
from .ensemble import EnsembleClassifier, EnsembleObjectiveParams, evaluate, plurality_vote, train_eode
from .feature_selection import FsObjectiveParams, select_features
from .gwo import GwoParams, optimize

__version__ = "0.1.0"

__all__ = [
    "ClassifierConfig", "ClassifierKind", "Dataset", "EnsembleClassifier", "EnsembleObjectiveParams",
    "FsObjectiveParams", "GwoParams", "apply_mask", "evaluate", "load_dataset", "make_dataset",
    "optimize", "plurality_vote", "select_features", "stratified_kfold", "stratified_split", "train_eode",
]
