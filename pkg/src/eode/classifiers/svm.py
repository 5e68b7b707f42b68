import numpy as np

from .knn import squared_distances
from .scaling import Standardizer

_TAU = 1e-12


def smo_solve(K, y, C=1.0, tol=1e-3, iter_limit=50000):
    """Solve the C-SVM dual with SMO and maximal-violating-pair selection.

    ``K`` is the kernel matrix and ``y`` holds +/-1 labels. Returns the dual
    coefficients, the bias and the number of pair updates performed.
    """
    n = y.shape[0]
    alpha = np.zeros(n)
    grad = -np.ones(n)  # gradient of 0.5 a'Qa - e'a with Q = yy'K
    pos = y > 0
    it = 0
    while it < iter_limit:
        up = (pos & (alpha < C)) | (~pos & (alpha > 0))
        low = (~pos & (alpha < C)) | (pos & (alpha > 0))
        score = -y * grad
        if not up.any() or not low.any():
            break
        i = int(np.flatnonzero(up)[np.argmax(score[up])])
        j = int(np.flatnonzero(low)[np.argmin(score[low])])
        gap = score[i] - score[j]
        if gap < tol:
            break
        eta = max(K[i, i] + K[j, j] - 2.0 * K[i, j], _TAU)
        step = gap / eta
        step = min(step, C - alpha[i] if y[i] > 0 else alpha[i])
        step = min(step, alpha[j] if y[j] > 0 else C - alpha[j])
        # Moving along d_i = y_i, d_j = -y_j keeps y'alpha fixed.
        alpha[i] += y[i] * step
        alpha[j] -= y[j] * step
        grad += step * y * (K[:, i] - K[:, j])
        it += 1
    score = -y * grad
    free = (alpha > 0) & (alpha < C)
    if free.any():
        b = float(score[free].mean())
    else:
        up = (pos & (alpha < C)) | (~pos & (alpha > 0))
        low = (~pos & (alpha < C)) | (pos & (alpha > 0))
        hi = score[up].max() if up.any() else 0.0
        lo = score[low].min() if low.any() else 0.0
        b = float(0.5 * (hi + lo))
    return alpha, b, it


class RBFSupportVectorMachine:
    """RBF-kernel SVM on standardised inputs; multiclass by one-vs-one voting."""

    def __init__(self, gamma="auto", C=1.0, iter_limit=50000, tol=1e-3):
        self.gamma = gamma
        self.C = C
        self.iter_limit = iter_limit
        self.tol = tol

    def fit(self, X, y):
        self.classes_ = np.unique(y)
        self.scaler_ = Standardizer().fit(X)
        Z = self.scaler_.transform(X)
        self.gamma_ = 1.0 / Z.shape[1] if self.gamma == "auto" else float(self.gamma)
        K = np.exp(-self.gamma_ * squared_distances(Z, Z))
        self.machines_ = []
        self.iterations_ = 0
        for a in range(self.classes_.size):
            for b in range(a + 1, self.classes_.size):
                rows = np.flatnonzero((y == self.classes_[a]) | (y == self.classes_[b]))
                t = np.where(y[rows] == self.classes_[a], 1.0, -1.0)
                alpha, bias, it = smo_solve(K[np.ix_(rows, rows)], t, self.C, self.tol, self.iter_limit)
                self.iterations_ += it
                sv = alpha > 0
                self.machines_.append((a, b, Z[rows[sv]], alpha[sv] * t[sv], bias))
        return self

    def predict(self, X):
        Z = self.scaler_.transform(X)
        votes = np.zeros((X.shape[0], self.classes_.size), dtype=np.int64)
        rows = np.arange(X.shape[0])
        for a, b, sv, coef, bias in self.machines_:
            if sv.shape[0]:
                f = np.exp(-self.gamma_ * squared_distances(Z, sv)) @ coef + bias
            else:
                f = np.full(X.shape[0], bias)
            winner = np.where(f >= 0, a, b)
            votes[rows, winner] += 1
        return self.classes_[np.argmax(votes, axis=1)]
