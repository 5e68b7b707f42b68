import numpy as np

from .scaling import Standardizer


class MLPClassifier:
    """One hidden tanh layer, softmax output, full-batch gradient descent.

    Weights start uniform in [-0.5, 0.5] from ``seed``; inputs are
    standardised with the training statistics.
    """

    def __init__(self, hidden=10, epochs=200, learning_rate=0.5, seed=0):
        self.hidden = hidden
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.seed = seed

    def fit(self, X, y):
        self.classes_ = np.unique(y)
        self.scaler_ = Standardizer().fit(X)
        Z = self.scaler_.transform(X)
        n, d = Z.shape
        c = self.classes_.size
        T = np.eye(c)[np.searchsorted(self.classes_, y)]
        rng = np.random.default_rng(self.seed)
        W1 = rng.uniform(-0.5, 0.5, size=(d, self.hidden))
        b1 = rng.uniform(-0.5, 0.5, size=self.hidden)
        W2 = rng.uniform(-0.5, 0.5, size=(self.hidden, c))
        b2 = rng.uniform(-0.5, 0.5, size=c)
        lr = self.learning_rate
        for _ in range(self.epochs):
            H = np.tanh(Z @ W1 + b1)
            P = _softmax(H @ W2 + b2)
            G2 = (P - T) / n
            G1 = (G2 @ W2.T) * (1.0 - H ** 2)
            W2 -= lr * (H.T @ G2)
            b2 -= lr * G2.sum(axis=0)
            W1 -= lr * (Z.T @ G1)
            b1 -= lr * G1.sum(axis=0)
        self.W1_, self.b1_, self.W2_, self.b2_ = W1, b1, W2, b2
        return self

    def predict(self, X):
        H = np.tanh(self.scaler_.transform(X) @ self.W1_ + self.b1_)
        return self.classes_[np.argmax(H @ self.W2_ + self.b2_, axis=1)]


def _softmax(S):
    S = S - S.max(axis=1, keepdims=True)
    E = np.exp(S)
    return E / E.sum(axis=1, keepdims=True)
