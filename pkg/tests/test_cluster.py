import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from aggrex.cluster import (Clustering, ClusteringError, FuzzyMembership, cluster_clustering, fuzzy_cmeans,
                            hac, initial_partition, kk_means, kk_seeds, kmeans, level_correlation,
                            median_rank_order, run_method, sse)
from aggrex.features import FeatureSet, pairwise
from oracles import brute_complete_linkage, brute_kmeans_min, is_single_move_optimal


def one_d(values):
    return FeatureSet.from_elements(np.asarray(values, dtype=float)[:, None, None])


def test_initial_partition_365_28():
    p = initial_partition(365, 28)
    sizes = [len(c) for c in p.clusters]
    assert sizes == [14] + [13] * 27
    assert p.clusters[0] == tuple(range(14))


def test_initial_partition_small():
    assert initial_partition(4, 2).clusters == ((0, 1), (2, 3))
    assert initial_partition(3, 3).clusters == ((0,), (1,), (2,))
    with pytest.raises(ClusteringError):
        initial_partition(3, 4)
    with pytest.raises(ClusteringError):
        initial_partition(3, 0)


def test_partition_invariant():
    with pytest.raises(ClusteringError):
        Clustering(3, ((0, 1),))
    with pytest.raises(ClusteringError):
        Clustering(3, ((0, 1), (1, 2)))
    with pytest.raises(ClusteringError):
        Clustering(2, ((0, 1), ()))


def test_kmeans_k1_and_k_equals_n():
    fs = one_d([3, 1, 4, 1, 5])
    one = kmeans(fs, 1)
    assert one.clusters == ((0, 1, 2, 3, 4),)
    assert len(one.history) == 1
    single = kmeans(fs, 5)
    assert single.k == 5
    assert sse(fs.flat, single.labels()) == 0.0


def test_kmeans_separated_example_matches_brute_force():
    x = [0, 1, 10, 11]
    c = kmeans(one_d(x), 2, initial_partition(4, 2))
    assert c.clusters == ((0, 1), (2, 3))
    assert sse(one_d(x).flat, c.labels()) == pytest.approx(brute_kmeans_min(x, 2))


@given(st.lists(st.floats(-50, 50, allow_nan=False), min_size=2, max_size=7), st.data())
def test_kmeans_local_optimum_and_monotone(values, data):
    k = data.draw(st.integers(1, len(values)))
    fs = one_d(values)
    c = kmeans(fs, k)
    blocks = [list(b) for b in c.clusters]
    assert is_single_move_optimal(values, blocks)
    assert sse(fs.flat, c.labels()) >= brute_kmeans_min(values, k) - 1e-9
    h = np.asarray(c.history)
    assert np.all(np.diff(h) <= 1e-9)


def test_kmeans_reaches_global_optimum_when_well_separated():
    # equal group sizes so the contiguous init blocks line up with the groups
    rng = np.random.default_rng(5)
    for _ in range(30):
        k = int(rng.integers(1, 4))
        size = int(rng.integers(1, 3))
        centers = np.arange(k) * 100.0
        x = np.concatenate([c + rng.uniform(-1, 1, size=size) for c in centers])
        c = kmeans(one_d(x), k)
        assert sse(one_d(x).flat, c.labels()) == pytest.approx(brute_kmeans_min(list(x), k), abs=1e-9)


def test_kmeans_local_optimum_with_unequal_groups():
    # contiguous init straddles the groups; no single move escapes, so the
    # result is a local but not global optimum
    x = [-0.99450959, 99.39031904, 200.85622684, 200.77945658]
    c = kmeans(one_d(x), 3)
    assert c.clusters == ((0, 1), (2,), (3,))
    assert is_single_move_optimal(x, [list(b) for b in c.clusters])
    assert sse(one_d(x).flat, c.labels()) > brute_kmeans_min(x, 3)


def test_kmeans_repairs_empty_cluster():
    # identical points leave one cluster empty after reassignment
    fs = one_d([0, 0, 0, 5])
    c = kmeans(fs, 3, Clustering.from_labels([0, 1, 1, 2]))
    assert c.k == 3


def test_fuzzy_rows_sum_to_one():
    rng = np.random.default_rng(0)
    fs = FeatureSet.from_elements(rng.normal(size=(20, 2, 4)))
    U = fuzzy_cmeans(fs, 3).matrix
    assert np.allclose(U.sum(axis=1), 1.0, atol=1e-9)
    assert U.min() >= 0.0 and U.max() <= 1.0


def test_fuzzy_k1_and_separated_points():
    assert np.all(fuzzy_cmeans(one_d([1, 2, 3]), 1).matrix == 1.0)
    U = fuzzy_cmeans(one_d([0.0, 100.0]), 2).matrix
    assert U[0, 0] >= 0.99 and U[1, 1] >= 0.99


def test_fuzzy_crisp_ties_go_low():
    assert FuzzyMembership(np.array([[0.5, 0.5], [0.2, 0.8]])).crisp().tolist() == [0, 1]


def test_fuzzy_rejects_bad_fuzzifier():
    with pytest.raises(ClusteringError):
        fuzzy_cmeans(one_d([1, 2]), 2, m=1.0)


def test_hac_examples():
    fs = one_d([0, 1, 10, 11])
    assert hac(fs, 2, "sqeuclidean").clusters == ((0, 1), (2, 3))
    assert hac(fs, 4, "sqeuclidean").k == 4
    for metric in ("sqeuclidean", "dtw", "correlation"):
        assert hac(fs, 1, metric).k == 1


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=8), st.data())
def test_hac_matches_naive_agglomeration(values, data):
    k = data.draw(st.integers(1, len(values)))
    fs = one_d(values)
    D = pairwise(fs, "sqeuclidean")
    got = hac(fs, k, "sqeuclidean")
    want, trace = brute_complete_linkage(D, k)
    assert sorted(got.clusters) == want
    assert list(got.history) == trace


def test_cluster_clustering_examples():
    fs = one_d([0, 1, 2, 3, 100, 101, 102, 103])
    cc = cluster_clustering(fs, 2, 4)
    assert cc.k == 8
    assert cc.lineage == (0, 0, 0, 0, 1, 1, 1, 1)
    assert cluster_clustering(fs, 1, 1).k == 1
    small = cluster_clustering(one_d([0, 1, 100, 101, 102, 103, 104, 105]), 2, 4)
    assert small.k == 6  # outer cluster of size 2 yields only 2 inner clusters


def test_level_correlation_outer_one_is_plain_hac():
    rng = np.random.default_rng(3)
    fs = FeatureSet.from_elements(rng.normal(size=(12, 2, 6)))
    assert level_correlation(fs, 1, 4).clusters == hac(fs, 4, "correlation").clusters


def test_kk_seeds_by_hand():
    fs = one_d([1, 4, 7, 10, 12])
    seeds = kk_seeds(fs, 4)
    assert seeds[:3] == [2, 4, 0]  # median 7, max 12, min 1
    # the mean-closest day (7) is already a seed, so the median walk supplies 4
    assert seeds[3] == 1
    assert len(kk_seeds(one_d([1, 2, 3]), 4)) == 3


def test_kk_small_outer_cluster_collapses_to_singletons():
    c = kk_means(one_d([0, 1, 2]), 1, 4)
    assert c.k == 3
    assert kk_means(one_d([0, 1, 2]), 1, 1).k == 1


def test_median_rank_order():
    assert median_rank_order(np.array([1, 4, 7, 10, 12])) == [2, 1, 3, 0, 4]
    assert median_rank_order(np.array([5.0, 1.0, 3.0, 2.0])) == [3, 1, 2, 0]


@pytest.mark.parametrize("method", ["k", "cc", "lc", "kk"])
def test_run_method_sizes(method):
    rng = np.random.default_rng(7)
    fs = FeatureSet.from_elements(rng.normal(size=(365, 2, 24)))
    c = run_method(method, fs, clusters=28)
    assert c.method_tag == method
    assert c.n_days == 365
    assert c.k == 28
    if method != "k":
        assert c.lineage is not None and max(c.lineage) == 6


def test_run_method_unknown():
    with pytest.raises(ClusteringError):
        run_method("spectral", one_d([1, 2, 3]), clusters=2)
