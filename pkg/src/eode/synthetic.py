"""Synthetic fixtures with known structure, used by tests and the benchmark suite."""
from __future__ import annotations

import numpy as np

from .data import Dataset, make_dataset


def blobs(n_per_class: int = 50, n_features: int = 2, n_classes: int = 2, separation: float = 10.0,
          seed: int = 0) -> Dataset:
    """Isotropic unit-variance Gaussian blobs with centres ``separation`` apart."""
    rng = np.random.default_rng(seed)
    X, y = [], []
    for c in range(n_classes):
        centre = np.zeros(n_features)
        centre[c % n_features] = separation * (1 + c // n_features)
        X.append(rng.normal(centre, 1.0, size=(n_per_class, n_features)))
        y += [c] * n_per_class
    return make_dataset(np.vstack(X), y, name="blobs")


def informative_features(n: int = 100, dim: int = 100, n_informative: int = 10,
                         shift: float = 1.0, seed: int = 0) -> tuple[Dataset, np.ndarray]:
    """Binary task decided by the informative columns; the rest is pure noise.

    Each row draws a hidden side z in {-1, +1}; informative columns are
    ``shift * z`` plus unit Gaussian noise, noise columns are unit Gaussian.
    The label is the majority sign of the informative columns, ties broken by
    the sign of their sum. Returns the dataset and the ground-truth mask.
    """
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, dim))
    informative = np.zeros(dim, dtype=bool)
    informative[rng.choice(dim, n_informative, replace=False)] = True
    side = rng.choice([-1.0, 1.0], size=(n, 1))
    X[:, informative] += shift * side
    signs = np.sign(X[:, informative]).sum(axis=1)
    totals = X[:, informative].sum(axis=1)
    y = np.where(signs != 0, signs > 0, totals > 0).astype(int)
    names = tuple(f"f{j}" for j in range(dim))
    return Dataset(X, y, names, 2, "informative"), informative


def noisy_small_sample(n: int = 60, dim: int = 500, n_classes: int = 3, n_informative: int = 20,
                       shift: float = 1.0, seed: int = 0) -> Dataset:
    """Few samples, many noise columns, classes separated by small mean shifts.

    Each class shifts its own block of informative columns by ``shift``.
    """
    rng = np.random.default_rng(seed)
    y = np.arange(n) % n_classes
    rng.shuffle(y)
    y[:n_classes] = np.arange(n_classes)
    X = rng.normal(size=(n, dim))
    cols = rng.choice(dim, n_informative, replace=False)
    blocks = np.array_split(cols, n_classes)
    for c, block in enumerate(blocks):
        X[np.ix_(y == c, block)] += shift
    return make_dataset(X, y, name="noisy_small_sample")


def bimodal_minority(n: int = 60, dim: int = 500, n_informative: int = 10, shift: float = 1.0,
                     seed: int = 0) -> Dataset:
    """Three classes on one informative block, buried among noise columns.

    Classes 0 and 1 sit at ``-shift`` and ``+shift`` on the informative
    columns; class 2 sits at ``-3 shift`` or ``+3 shift`` (chosen per row), so
    its class mean coincides with the midpoint of the other two. Linear
    discriminants can separate 0 from 1 but not recover class 2.
    """
    rng = np.random.default_rng(seed)
    y = np.arange(n) % 3
    rng.shuffle(y)
    y[:3] = np.arange(3)
    X = rng.normal(size=(n, dim))
    cols = rng.choice(dim, n_informative, replace=False)
    centre = np.where(y == 0, -shift, shift)
    far = y == 2
    centre[far] = 3.0 * shift * rng.choice([-1.0, 1.0], size=int(far.sum()))
    X[:, cols] += centre[:, None]
    return make_dataset(X, y, name="bimodal_minority")


def interval_classes(n: int = 60, dim: int = 500, n_informative: int = 3, label_noise: float = 0.15,
                     spread: float = 0.1, seed: int = 0) -> Dataset:
    """Classes are three intervals of a hidden score carried by a few columns.

    The hidden score is uniform on [-1.5, 1.5); class 0 below -0.5, class 2
    from 0.5 up, class 1 in between. Informative columns copy the score with
    ``spread`` Gaussian noise; a ``label_noise`` fraction of labels is
    redrawn uniformly.
    """
    rng = np.random.default_rng(seed)
    score = rng.uniform(-1.5, 1.5, size=n)
    y = np.digitize(score, [-0.5, 0.5])
    flip = rng.random(n) < label_noise
    y[flip] = rng.integers(0, 3, size=int(flip.sum()))
    X = rng.normal(size=(n, dim))
    cols = rng.choice(dim, n_informative, replace=False)
    X[:, cols] = score[:, None] + spread * rng.normal(size=(n, n_informative))
    return make_dataset(X, y, name="interval_classes")
