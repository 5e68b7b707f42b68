import itertools
from collections import Counter

import numpy as np
import pytest

from eode.classifiers import ALL_KINDS, ClassifierConfig, ClassifierKind, fit_arrays
from eode.clustering import choose_K, generate_subspaces, kmeans
from eode.data import DataError, make_dataset, stratified_split
from eode.ensemble import (
    EnsembleClassifier,
    EnsembleObjectiveParams,
    EnsembleSubsetObjective,
    ModelPool,
    PoolEntry,
    build_model_pool,
    ensemble_fitness,
    evaluate,
    plurality_vote,
    prefilter_pool,
    score_pool,
    train_eode,
)
from eode.gwo import GwoParams
from eode.synthetic import blobs


def brute_force_wcss(X):
    best = np.inf
    n = X.shape[0]
    for bits in range(1, 2 ** (n - 1)):
        side = np.array([(bits >> i) & 1 for i in range(n)], dtype=bool)
        wcss = sum(((X[s] - X[s].mean(axis=0)) ** 2).sum() for s in (side, ~side))
        best = min(best, wcss)
    return best


def counting_vote(column):
    counts = Counter(column)
    top = max(counts.values())
    return min(c for c, v in counts.items() if v == top)


def wcss_of(X, clusters):
    return sum(((X[r] - X[r].mean(axis=0)) ** 2).sum() for r in clusters)


class TestKMeans:
    def test_k1_centroid_is_mean(self):
        X = np.random.default_rng(0).normal(size=(9, 3))
        cs = kmeans(X, 1, seed=0)
        np.testing.assert_allclose(cs.centroids[0], X.mean(axis=0))
        assert cs.clusters[0].tolist() == list(range(9))

    def test_k_equals_n(self):
        X = np.random.default_rng(1).normal(size=(6, 2))
        cs = kmeans(X, 6, seed=0)
        assert len(cs) == 6
        assert cs.wcss[6] == pytest.approx(0.0, abs=1e-12)

    def test_square_corners(self):
        X = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float)
        cs = kmeans(X, 2, seed=3)
        assert cs.wcss[2] == pytest.approx(brute_force_wcss(X), abs=1e-9)
        assert cs.wcss[2] == pytest.approx(1.0)

    def test_matches_brute_force_on_small_sets(self):
        hits = 0
        for n in range(3, 7):
            for s in range(10):
                X = np.random.default_rng(100 * n + s).normal(size=(n, 2))
                hits += abs(kmeans(X, 2, seed=s).wcss[2] - brute_force_wcss(X)) <= 1e-9
        assert hits >= 36

    def test_lloyd_trace_non_increasing(self):
        X = np.random.default_rng(2).normal(size=(60, 3))
        cs = kmeans(X, 4, seed=1, n_init=1)
        trace = cs.wcss_trace[4]
        assert all(b <= a + 1e-9 for a, b in zip(trace, trace[1:]))
        assert trace[-1] == pytest.approx(wcss_of(X, cs.clusters))

    def test_duplicate_points(self):
        X = np.zeros((5, 2))
        cs = kmeans(X, 3, seed=0)
        assert sum(len(c) for c in cs.clusters) == 5

    def test_bad_k(self):
        with pytest.raises(ValueError):
            kmeans(np.zeros((3, 1)), 4)


class TestSubspaces:
    @pytest.mark.parametrize("m,K", [(32, 2), (243, 3), (100, 3), (2, 2), (48, 2), (1024, 4)])
    def test_choose_K(self, m, K):
        assert choose_K(m) == K

    def test_each_k_partitions_rows(self):
        X = np.random.default_rng(4).normal(size=(40, 3))
        cs = generate_subspaces(X, 3, seed=2)
        assert len(cs) <= 6
        for k in (1, 2, 3):
            rows = [r for c, kk in zip(cs.clusters, cs.k_of_cluster) if kk == k for r in c]
            assert sorted(rows) == list(range(40))
        assert [cs.index_within_k(i) for i in range(len(cs))] == [0, 0, 1, 0, 1, 2][:len(cs)]


def test_plurality_vote_matches_counting_oracle():
    for voters in range(1, 6):
        for n_classes in range(1, 4):
            combos = list(itertools.product(range(n_classes), repeat=voters))
            P = np.array(combos).T  # voters x samples
            got = plurality_vote(P, n_classes)
            assert got.tolist() == [counting_vote(c) for c in combos]


def test_plurality_vote_examples():
    assert plurality_vote([[0], [1]]).tolist() == [0]
    assert plurality_vote([[2], [1], [2]]).tolist() == [2]
    assert plurality_vote([[1, 0]], 2).tolist() == [1, 0]


def constant_entry(label, acc, dim=2):
    model = fit_arrays(ClassifierKind.DISCR, np.zeros((1, dim)), [label])
    return PoolEntry(model, 0, 1, 0, validation_accuracy=acc)


class TestPool:
    def test_size_is_clusters_times_kinds(self):
        ds = blobs(30, 3, 2, separation=4, seed=0)
        cs = generate_subspaces(ds, 3, seed=0)
        pool = build_model_pool(ds, cs, ClassifierConfig(seed=1))
        assert len(pool) == 6 * len(cs)
        assert [e.kind for e in pool.entries[:6]] == list(ALL_KINDS)

    def test_pure_cluster_gives_constants(self):
        ds = blobs(10, 2, 2, separation=30, seed=0)
        cs = kmeans(ds, 2, seed=0)
        pool = build_model_pool(ds, cs)
        assert all(e.model.is_constant for e in pool.entries)

    def test_prefilter_keeps_above_mean(self):
        pool = ModelPool([constant_entry(0, a) for a in (1.0, 0.8, 0.6, 0.0)])
        kept = prefilter_pool(pool).accuracies.tolist()
        assert kept == [1.0, 0.8, 0.6]

    def test_prefilter_keeps_top_three(self):
        pool = ModelPool([constant_entry(0, a) for a in (0.9, 0.5, 0.1)])
        assert prefilter_pool(pool).accuracies.tolist() == [0.9, 0.5, 0.1]
        pool = ModelPool([constant_entry(0, a) for a in (0.2, 0.9, 0.2, 0.2, 0.2)])
        assert prefilter_pool(pool).accuracies.tolist() == [0.2, 0.9, 0.2]

    def test_prefilter_equal_scores(self):
        pool = ModelPool([constant_entry(0, 0.5) for _ in range(5)])
        kept = prefilter_pool(pool)
        assert kept.entries == pool.entries[:3]


class TestEnsembleObjective:
    def test_example_value(self):
        # Three of ten models selected, vote accuracy 0.9: 0.9*0.1 + 0.1*0.3 = 0.12.
        truth = np.array([0] * 9 + [1])
        preds = np.zeros((10, 10), dtype=int)
        obj = EnsembleSubsetObjective(preds, truth, 2, EnsembleObjectiveParams())
        sel = np.zeros(10, dtype=bool)
        sel[[1, 4, 7]] = True
        assert obj(sel) == pytest.approx(0.12, abs=1e-12)

    def test_empty_and_single(self):
        truth = np.array([0, 1, 1, 0])
        preds = np.array([[0, 1, 1, 0], [1, 1, 1, 1]])
        obj = EnsembleSubsetObjective(preds, truth, 2, EnsembleObjectiveParams())
        assert obj(np.zeros(2)) == pytest.approx(1.1)
        assert obj(np.array([1, 0])) == pytest.approx(0.05)
        assert obj(np.array([0, 1])) == pytest.approx(0.9 * 0.5 + 0.05)

    def test_ensemble_fitness_from_pool(self):
        val = make_dataset(np.zeros((4, 2)), [0, 0, 1, 0])
        pool = score_pool(ModelPool([constant_entry(0, None), constant_entry(1, None)]), val)
        assert pool.accuracies.tolist() == [0.75, 0.25]
        assert ensemble_fitness([1, 0], pool, val, EnsembleObjectiveParams()) == pytest.approx(0.9 * 0.25 + 0.05)


class TestEnsembleClassifier:
    def test_evaluate_constant_members(self):
        test = make_dataset(np.zeros((4, 3)), [0, 1, 1, 1])
        ens = EnsembleClassifier([constant_entry(1, 1.0)], np.array([True, False, True]), 2)
        assert evaluate(ens, test) == 0.75

    def test_evaluate_checks_width(self):
        ens = EnsembleClassifier([constant_entry(1, 1.0)], np.array([True, True]), 2)
        with pytest.raises(DataError):
            evaluate(ens, make_dataset(np.zeros((2, 3)), [0, 1]))

    def test_mask_model_mismatch(self):
        with pytest.raises(ValueError):
            EnsembleClassifier([constant_entry(1, 1.0, dim=3)], np.array([True, True]), 2)


@pytest.fixture(scope="module")
def blob_run():
    ds = blobs(30, 4, 3, separation=10, seed=5)
    split = stratified_split(ds, 0.2, 1)
    outcome = train_eode(split.train, GwoParams(8, 6, 0.5, 0), seed=3)
    return split, outcome


def test_train_eode_blobs(blob_run):
    split, outcome = blob_run
    ens = outcome.ensemble
    assert evaluate(ens, split.test) == 1.0
    assert ens.size == sum(f.selected for f in outcome.folds)
    assert len(outcome.folds) == 5
    assert ens.size >= len(outcome.folds)
    assert {e.fold for e in ens.models} == set(range(5))
    for f in outcome.folds:
        assert f.pool_size == 6 * f.clusters
        assert 1 <= f.selected <= f.filtered_size <= f.pool_size


def test_train_eode_deterministic(blob_run):
    split, outcome = blob_run
    again = train_eode(split.train, GwoParams(8, 6, 0.5, 0), seed=3)
    assert again.ensemble.manifest() == outcome.ensemble.manifest()
    np.testing.assert_array_equal(again.ensemble.predict(split.test.samples),
                                  outcome.ensemble.predict(split.test.samples))


def test_ensemble_round_trip(blob_run):
    split, outcome = blob_run
    back = EnsembleClassifier.from_dict(outcome.ensemble.to_dict())
    np.testing.assert_array_equal(back.predict(split.test.samples), outcome.ensemble.predict(split.test.samples))
    manifest = outcome.ensemble.manifest()
    assert len(manifest["models"]) == outcome.ensemble.size
    assert manifest["selected_features"] == [n for n, b in zip(split.train.feature_names,
                                                               outcome.selection.mask) if b]


def test_selected_subset_beats_full_pool_on_validation():
    # GWO minimises f2 on the validation rows, so its pick should rarely vote worse than the whole pool.
    wins = 0
    for s in range(10):
        ds = blobs(20, 3, 3, separation=2.5, seed=s)
        split = stratified_split(ds, 0.3, s)
        train, val = split.train, split.test
        pool = build_model_pool(train, generate_subspaces(train, 2, seed=s), ClassifierConfig(seed=s))
        pool = score_pool(pool, val)
        preds = np.stack([e.validation_predictions for e in pool.entries])
        obj = EnsembleSubsetObjective(preds, val.labels, val.class_count, EnsembleObjectiveParams())
        from eode.gwo import optimize

        result = optimize(obj, len(pool), GwoParams(10, 10, 0.5, s))
        chosen = preds[result.best_mask]
        full = np.mean(plurality_vote(preds, 3) == val.labels)
        wins += np.mean(plurality_vote(chosen, 3) == val.labels) >= full
    assert wins >= 7
