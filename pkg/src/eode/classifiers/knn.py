import numpy as np

_CHUNK_ELEMENTS = 4_000_000


def squared_distances(A, B):
    """Exact pairwise squared Euclidean distances, chunked to bound memory."""
    out = np.empty((A.shape[0], B.shape[0]))
    step = max(1, _CHUNK_ELEMENTS // max(1, B.shape[0] * B.shape[1]))
    for start in range(0, A.shape[0], step):
        diff = A[start:start + step, None, :] - B[None, :, :]
        out[start:start + step] = np.einsum("ijk,ijk->ij", diff, diff)
    return out


class KNearestNeighbors:
    """Euclidean k-NN with deterministic tie-breaking.

    Equidistant neighbours are ranked by training row index; vote ties go to
    the lowest class id.
    """

    def __init__(self, k=3):
        self.k = k

    def fit(self, X, y):
        self.X_ = np.array(X, dtype=float)
        self.y_ = np.array(y)
        self.classes_ = np.unique(self.y_)
        return self

    def predict(self, X):
        k = min(self.k, self.X_.shape[0])
        d2 = squared_distances(X, self.X_)
        nearest = np.argsort(d2, axis=1, kind="stable")[:, :k]
        codes = np.searchsorted(self.classes_, self.y_[nearest])
        votes = np.zeros((X.shape[0], self.classes_.size), dtype=np.int64)
        np.add.at(votes, (np.arange(X.shape[0])[:, None], codes), 1)
        return self.classes_[np.argmax(votes, axis=1)]
