import numpy as np

LEAF = -1


class CARTClassifier:
    """Unpruned CART tree with Gini impurity.

    Nodes live in flat arrays (``feature``, ``threshold``, ``left``, ``right``,
    ``value``) so the fitted tree is plain data. Samples with
    ``x[feature] <= threshold`` go left. Among equally good splits the lowest
    feature index and then the lowest threshold wins.
    """

    def __init__(self, min_leaf=1):
        self.min_leaf = min_leaf

    def fit(self, X, y):
        self.classes_ = np.unique(y)
        codes = np.searchsorted(self.classes_, y)
        feature, threshold, left, right, value = [], [], [], [], []

        def new_node(rows):
            counts = np.bincount(codes[rows], minlength=self.classes_.size)
            feature.append(LEAF)
            threshold.append(0.0)
            left.append(LEAF)
            right.append(LEAF)
            value.append(int(np.argmax(counts)))
            return len(feature) - 1, counts

        root, root_counts = new_node(np.arange(X.shape[0]))
        stack = [(root, np.arange(X.shape[0]), root_counts)]
        while stack:
            node, rows, counts = stack.pop()
            if np.count_nonzero(counts) <= 1 or rows.size < 2 * self.min_leaf:
                continue
            split = self._best_split(X[rows], codes[rows])
            if split is None:
                continue
            j, thr = split
            go_left = X[rows, j] <= thr
            feature[node] = j
            threshold[node] = thr
            l_node, l_counts = new_node(rows[go_left])
            r_node, r_counts = new_node(rows[~go_left])
            left[node], right[node] = l_node, r_node
            stack.append((r_node, rows[~go_left], r_counts))
            stack.append((l_node, rows[go_left], l_counts))
        self.feature_ = np.array(feature, dtype=np.int64)
        self.threshold_ = np.array(threshold, dtype=float)
        self.left_ = np.array(left, dtype=np.int64)
        self.right_ = np.array(right, dtype=np.int64)
        self.value_ = np.array(value, dtype=np.int64)
        return self

    def _best_split(self, Xn, cn):
        n, d = Xn.shape
        order = np.argsort(Xn, axis=0, kind="stable")
        xs = np.take_along_axis(Xn, order, axis=0)
        onehot = np.eye(self.classes_.size)[cn[order]]  # (n, d, C)
        left_counts = np.cumsum(onehot, axis=0)[:-1]  # split after row i -> i+1 on the left
        total = left_counts[-1] + onehot[-1]
        right_counts = total[None] - left_counts
        n_left = np.arange(1, n)[:, None]
        n_right = n - n_left
        # Maximising sum(count^2)/size on both sides minimises weighted Gini.
        score = (left_counts ** 2).sum(axis=2) / n_left + (right_counts ** 2).sum(axis=2) / n_right
        valid = (xs[1:] > xs[:-1]) & (n_left >= self.min_leaf) & (n_right >= self.min_leaf)
        if not valid.any():
            return None
        score = np.where(valid, score, -np.inf).T  # (d, n-1): feature-major argmax
        flat = int(np.argmax(score))
        j, i = divmod(flat, n - 1)
        return j, float(0.5 * (xs[i, j] + xs[i + 1, j]))

    def predict(self, X):
        node = np.zeros(X.shape[0], dtype=np.int64)
        active = self.feature_[node] != LEAF
        while active.any():
            idx = np.flatnonzero(active)
            f = self.feature_[node[idx]]
            go_left = X[idx, f] <= self.threshold_[node[idx]]
            node[idx] = np.where(go_left, self.left_[node[idx]], self.right_[node[idx]])
            active = self.feature_[node] != LEAF
        return self.classes_[self.value_[node]]
