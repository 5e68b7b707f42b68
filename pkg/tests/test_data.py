import itertools
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eode.data import (
    DataError,
    ParseError,
    apply_mask,
    load_dataset,
    make_dataset,
    save_dataset,
    stratified_kfold,
    stratified_split,
)


def write_csv(path, header, rows):
    path.write_text("\n".join([",".join(header)] + [",".join(map(str, r)) for r in rows]) + "\n")
    return path


def two_class(n0, n1, dim=3, seed=0):
    rng = np.random.default_rng(seed)
    return make_dataset(rng.normal(size=(n0 + n1, dim)), [0] * n0 + [1] * n1)


class TestLoad:
    def test_labels_encoded_by_first_appearance(self, tmp_path):
        path = write_csv(tmp_path / "d.csv", ["a", "b", "label"], [[1, 2, 5], [3, 4, 5], [5, 6, 7]])
        ds = load_dataset(path)
        assert ds.labels.tolist() == [0, 0, 1]
        assert ds.class_count == 2
        assert ds.feature_names == ("a", "b")
        assert ds.name == "d"

    def test_first_appearance_not_sorted(self, tmp_path):
        path = write_csv(tmp_path / "d.csv", ["a", "label"], [[1, 9], [2, 3], [3, 9]])
        assert load_dataset(path).labels.tolist() == [0, 1, 0]

    def test_dimensions_match_file(self, tmp_path):
        rows = [[i, i * 2, i % 2] for i in range(6)]
        ds = load_dataset(write_csv(tmp_path / "d.csv", ["x", "y", "label"], rows))
        assert (ds.n, ds.dim) == (6, 2)
        np.testing.assert_array_equal(ds.samples[:, 1], [0, 2, 4, 6, 8, 10])

    def test_single_class_rejected(self, tmp_path):
        path = write_csv(tmp_path / "d.csv", ["a", "label"], [[1, 4], [2, 4]])
        with pytest.raises(DataError, match="2 classes"):
            load_dataset(path)

    def test_malformed_cell_reports_position(self, tmp_path):
        path = write_csv(tmp_path / "d.csv", ["a", "b", "label"], [[1, 2, 0], [3, "x", 1]])
        with pytest.raises(ParseError) as info:
            load_dataset(path)
        assert (info.value.row, info.value.column) == (3, 2)

    def test_nan_rejected(self, tmp_path):
        path = write_csv(tmp_path / "d.csv", ["a", "label"], [[1, 0], ["nan", 1]])
        with pytest.raises(DataError, match="NaN"):
            load_dataset(path)

    def test_header_needs_label_column(self, tmp_path):
        path = write_csv(tmp_path / "d.csv", ["a", "b"], [[1, 0], [2, 1]])
        with pytest.raises(ParseError):
            load_dataset(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            load_dataset(tmp_path / "nope.csv")

    def test_round_trip(self, tmp_path):
        ds = two_class(4, 3)
        save_dataset(ds, tmp_path / "r.csv")
        back = load_dataset(tmp_path / "r.csv")
        np.testing.assert_array_equal(back.samples, ds.samples)
        np.testing.assert_array_equal(back.labels, ds.labels)


class TestSplit:
    def test_exact_proportions(self):
        split = stratified_split(two_class(50, 50), 0.2, seed=3)
        assert np.bincount(split.test.labels).tolist() == [10, 10]
        assert np.bincount(split.train.labels).tolist() == [40, 40]

    def test_deterministic(self):
        ds = two_class(50, 50)
        a, b = stratified_split(ds, 0.2, 11), stratified_split(ds, 0.2, 11)
        np.testing.assert_array_equal(a.test_rows, b.test_rows)
        assert not np.array_equal(a.test_rows, stratified_split(ds, 0.2, 12).test_rows)

    @pytest.mark.parametrize("n0", [60, 75, 89, 104, 120])
    def test_chen_sized_split(self, n0):
        # 179 rows in two classes: each class contributes round(0.2 * size) test rows.
        n1 = 179 - n0
        split = stratified_split(two_class(n0, n1), 0.2, seed=0)
        expected = [int(np.floor(0.2 * n0 + 0.5)), int(np.floor(0.2 * n1 + 0.5))]
        assert np.bincount(split.test.labels).tolist() == expected
        assert abs(split.test.n - 36) <= 1

    def test_disjoint_cover(self):
        ds = two_class(13, 8)
        split = stratified_split(ds, 0.3, 1)
        assert set(split.train_rows).isdisjoint(split.test_rows)
        assert sorted([*split.train_rows, *split.test_rows]) == list(range(ds.n))

    def test_clamps_keep_both_sides(self):
        split = stratified_split(two_class(2, 30), 0.01, 0)
        counts = np.bincount(split.test.labels, minlength=2)
        assert counts.tolist() == [1, 1]
        assert np.bincount(split.train.labels).tolist() == [1, 29]

    def test_singleton_class_rejected(self):
        ds = make_dataset(np.zeros((4, 1)), [0, 0, 0, 1])
        with pytest.raises(DataError):
            stratified_split(ds, 0.2, 0)


class TestKFold:
    def test_exact_division(self):
        folds = stratified_kfold(two_class(5, 5), 5, 0)
        ds = two_class(5, 5)
        for f in folds.folds:
            assert sorted(ds.labels[list(f)].tolist()) == [0, 1]

    def test_remainder_placement(self):
        folds = stratified_kfold(two_class(6, 5), 5, 0)
        assert sorted(len(f) for f in folds.folds) == [2, 2, 2, 2, 3]

    def test_small_class_warns(self):
        ds = two_class(4, 10)
        with pytest.warns(UserWarning, match="round-robin"):
            folds = stratified_kfold(ds, 5, 0)
        assert folds.warnings
        assert sorted(r for f in folds.folds for r in f) == list(range(ds.n))

    @settings(max_examples=60, deadline=None)
    @given(
        counts=st.lists(st.integers(1, 12), min_size=2, max_size=4),
        k=st.integers(2, 6),
        seed=st.integers(0, 2 ** 32),
    )
    def test_partition_and_balance(self, counts, k, seed):
        if sum(counts) < k:
            return
        labels = np.repeat(np.arange(len(counts)), counts)
        ds = make_dataset(np.zeros((labels.size, 1)), labels)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            folds = stratified_kfold(ds, k, seed)
        rows = [r for f in folds.folds for r in f]
        assert sorted(rows) == list(range(ds.n))
        for a, b in itertools.combinations(folds.folds, 2):
            assert not set(a) & set(b)
        for c in range(ds.class_count):
            per_fold = [int(np.sum(ds.labels[list(f)] == c)) for f in folds.folds]
            assert max(per_fold) - min(per_fold) <= 1
        again = stratified_kfold(ds, k, seed) if min(counts) >= k else folds
        assert again.folds == folds.folds


class TestMask:
    def test_selects_columns_in_order(self):
        ds = make_dataset(np.arange(10.0).reshape(2, 5), [0, 1])
        masked = apply_mask(ds, [1, 0, 1, 0, 1])
        np.testing.assert_array_equal(masked.samples, [[0, 2, 4], [5, 7, 9]])
        assert masked.feature_names == ("f0", "f2", "f4")

    def test_all_ones_is_identity(self):
        ds = two_class(3, 3, dim=4)
        masked = apply_mask(ds, np.ones(4, bool))
        np.testing.assert_array_equal(masked.samples, ds.samples)
        np.testing.assert_array_equal(masked.labels, ds.labels)

    def test_all_zero_rejected(self):
        with pytest.raises(DataError):
            apply_mask(two_class(2, 2), np.zeros(3, bool))

    def test_wrong_length_rejected(self):
        with pytest.raises(DataError):
            apply_mask(two_class(2, 2), [1, 1])


def test_dataset_is_immutable():
    ds = two_class(2, 2)
    with pytest.raises(ValueError):
        ds.samples[0, 0] = 5.0
