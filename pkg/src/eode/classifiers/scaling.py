import numpy as np

STD_FLOOR = 1e-12


class Standardizer:
    """Per-feature z-scoring; constant features map to zero."""

    def fit(self, X):
        self.mean_ = X.mean(axis=0)
        std = X.std(axis=0)
        self.scale_ = np.where(std > STD_FLOOR, std, 1.0)
        return self

    def transform(self, X):
        return (X - self.mean_) / self.scale_
