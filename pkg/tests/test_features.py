import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from aggrex.features import (FeatureError, FeatureSet, build_day_elements, correlation_distance,
                             day_sums_csv, dtw_distance, pairwise, sq_euclidean)
from aggrex.instance import Area, Demand, Instance, RenewableUnit, SyntheticSpec, generate_synthetic
from oracles import reference_dtw



def test_constant_demand_is_negated():
    inst = Instance("c", horizon=48, areas=(Area("P"),), demands=(Demand("d", "P", np.full(48, 5.0)),))
    fs = build_day_elements(inst)
    assert fs.elements.shape == (2, 1, 24)
    assert np.all(fs.elements == -5.0)
    assert fs.day_sums.tolist() == [-120.0, -120.0]
    assert fs.series_ids == ("demand:d",)


def test_res_row_is_profile_times_capacity():
    inst = Instance("r", horizon=24, areas=(Area("P"),),
                    res_units=(RenewableUnit("w", "P", 10.0, np.ones(24)),))
    fs = build_day_elements(inst)
    assert np.all(fs.elements[0, 0] == 10.0)


def test_shape_on_a_year():
    inst = generate_synthetic(SyntheticSpec(n_days=365, storages=False, evs=False, chp=False), 0)
    fs = build_day_elements(inst)
    assert fs.elements.shape[0] == 365 and fs.elements.shape[2] == 24
    assert len(fs.series_ids) == fs.elements.shape[1]
    # day d covers hours [24d, 24d+24)
    demand = inst.demands[0].series
    assert np.array_equal(fs.elements[100, 0], -demand[2400:2424])


def test_day_sums_are_exact_element_sums():
    fs = build_day_elements(generate_synthetic(SyntheticSpec(n_days=10), 4))
    for d in range(fs.n_days):
        assert fs.day_sums[d] == math.fsum(fs.elements[d].ravel())


def test_elements_are_read_only():
    fs = FeatureSet.from_elements(np.zeros((2, 1, 3)))
    with pytest.raises(ValueError):
        fs.elements[0, 0, 0] = 1.0


def test_sq_euclidean_examples():
    assert sq_euclidean([1, 2], [1, 2]) == 0.0
    assert sq_euclidean([1, 2], [3, 5]) == 13.0
    assert sq_euclidean([[1, 2], [1, 2]], [[3, 5], [3, 5]]) == 26.0


def test_shape_mismatch():
    with pytest.raises(FeatureError):
        sq_euclidean([1, 2], [1, 2, 3])
    with pytest.raises(FeatureError):
        dtw_distance([1, 2], [1, 2, 3])


def test_dtw_examples():
    assert dtw_distance([0, 0, 1], [0, 1, 1]) == 0.0
    assert dtw_distance([2], [5]) == 3.0
    assert dtw_distance([3, 1, 4], [3, 1, 4]) == 0.0


def test_dtw_sums_over_series():
    a = np.array([[0, 0, 1], [2, 2, 2]])
    b = np.array([[0, 1, 1], [3, 3, 3]])
    assert dtw_distance(a, b) == 0.0 + 3.0


def test_dtw_matches_reference_dp():
    rng = np.random.default_rng(11)
    for _ in range(200):
        n = int(rng.integers(1, 25))
        a, b = rng.normal(size=n), rng.normal(size=n)
        assert dtw_distance(a, b) == reference_dtw(a, b)


def test_correlation_examples():
    a = np.array([1.0, 3.0, 2.0, 7.0])
    assert correlation_distance(a, 2 * a + 3) == pytest.approx(0.0, abs=1e-12)
    z = a - a.mean()
    assert correlation_distance(z, -z) == pytest.approx(2.0, abs=1e-12)
    assert correlation_distance(np.full(4, 3.0), a) == 1.0
    assert correlation_distance(a, np.full(4, 3.0)) == 1.0
    assert correlation_distance(np.full(4, 3.0), np.full(4, 3.0)) == 0.0


elements = arrays(np.float64, (2, 6), elements=st.floats(-100, 100, allow_nan=False))


@given(elements, elements)
def test_distance_axioms(a, b):
    for fn in (sq_euclidean, dtw_distance, correlation_distance):
        assert fn(a, a) == 0.0
        assert fn(a, b) >= 0.0
        assert fn(a, b) == pytest.approx(fn(b, a), rel=1e-12, abs=1e-12)


@given(elements, elements)
def test_sq_euclidean_is_squared_norm(a, b):
    assert sq_euclidean(a, b) == pytest.approx(float(np.linalg.norm((a - b).ravel()) ** 2), rel=1e-9, abs=1e-9)


@given(elements, elements)
def test_dtw_bounded_by_identity_path(a, b):
    assert dtw_distance(a, b) <= np.abs(a - b).sum() + 1e-9


@given(elements, elements)
def test_correlation_range(a, b):
    assert -1e-9 <= correlation_distance(a, b) <= 2 + 1e-9


def test_pairwise_matches_scalar_functions():
    rng = np.random.default_rng(2)
    fs = FeatureSet.from_elements(rng.normal(size=(7, 2, 5)))
    for metric, fn in (("sqeuclidean", sq_euclidean), ("dtw", dtw_distance),
                       ("correlation", correlation_distance)):
        D = pairwise(fs, metric)
        for i in range(7):
            for j in range(7):
                assert D[i, j] == pytest.approx(fn(fs.elements[i], fs.elements[j]), rel=1e-12, abs=1e-12)
    with pytest.raises(FeatureError):
        pairwise(fs, "cosine")


def test_day_sums_csv():
    fs = FeatureSet.from_elements(np.array([[[1.0, 2.0]], [[0.5, 0.25]]]))
    assert day_sums_csv(fs) == "day,sum\n0,3.0\n1,0.75\n"
