"""The six base learners (discriminant, tree, k-NN, MLP, SVM, kernel naive Bayes)."""
from .base import (
    ALL_KINDS,
    ClassifierConfig,
    ClassifierKind,
    ConstantEstimator,
    TrainedModel,
    accuracy,
    cv_accuracy,
    fit,
    fit_arrays,
    predict,
)
from .serialize import dumps, loads, model_from_dict, model_to_dict

__all__ = [
    "ALL_KINDS", "ClassifierConfig", "ClassifierKind", "ConstantEstimator", "TrainedModel",
    "accuracy", "cv_accuracy", "fit", "fit_arrays", "predict",
    "dumps", "loads", "model_from_dict", "model_to_dict",
]
