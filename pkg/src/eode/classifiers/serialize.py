"""JSON round-trip for fitted models.

A blob is ``{"format": 1, "kind": ..., "estimator": {"class": ..., "state": ...}}``
where arrays are stored as ``{"__ndarray__": nested lists, "dtype": str}``.
The layout may change between package versions.
"""
import json

import numpy as np

from .base import ClassifierKind, ConstantEstimator, TrainedModel
from .discriminant import DiagLinearDiscriminant
from .knn import KNearestNeighbors
from .mlp import MLPClassifier
from .naive_bayes import KernelNaiveBayes
from .scaling import Standardizer
from .svm import RBFSupportVectorMachine
from .tree import CARTClassifier

FORMAT_VERSION = 1

_CLASSES = {
    cls.__name__: cls
    for cls in (
        ConstantEstimator, DiagLinearDiscriminant, KNearestNeighbors, MLPClassifier,
        KernelNaiveBayes, RBFSupportVectorMachine, CARTClassifier, Standardizer,
    )
}


def _encode(value):
    if isinstance(value, np.ndarray):
        return {"__ndarray__": value.tolist(), "dtype": str(value.dtype)}
    if isinstance(value, np.generic):
        return value.item()
    if type(value).__name__ in _CLASSES:
        return {"__object__": type(value).__name__, "state": _encode(vars(value))}
    if isinstance(value, dict):
        return {k: _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return {"__seq__": [_encode(v) for v in value], "tuple": isinstance(value, tuple)}
    return value


def _decode(value):
    if isinstance(value, dict):
        if "__ndarray__" in value:
            return np.array(value["__ndarray__"], dtype=value["dtype"])
        if "__object__" in value:
            obj = _CLASSES[value["__object__"]].__new__(_CLASSES[value["__object__"]])
            obj.__dict__.update(_decode(value["state"]))
            return obj
        if "__seq__" in value:
            items = [_decode(v) for v in value["__seq__"]]
            return tuple(items) if value["tuple"] else items
        return {k: _decode(v) for k, v in value.items()}
    return value


def model_to_dict(model: TrainedModel) -> dict:
    return {
        "format": FORMAT_VERSION,
        "kind": model.kind.value,
        "classes_seen": list(model.classes_seen),
        "n_features": model.n_features,
        "train_seed": model.train_seed,
        "estimator": _encode(model.estimator),
    }


def model_from_dict(blob: dict) -> TrainedModel:
    if blob.get("format") != FORMAT_VERSION:
        raise ValueError(f"unsupported model format {blob.get('format')!r}")
    return TrainedModel(
        ClassifierKind(blob["kind"]),
        _decode(blob["estimator"]),
        tuple(blob["classes_seen"]),
        int(blob["n_features"]),
        int(blob["train_seed"]),
    )


def dumps(model: TrainedModel) -> str:
    return json.dumps(model_to_dict(model))


def loads(text: str) -> TrainedModel:
    return model_from_dict(json.loads(text))
