import json

import numpy as np
import pytest

from amrsim.baselines import (
    DimensionAssignment,
    InfeasiblePartition,
    correlation_weights,
    ilp_partition,
    sb_full_predict,
    sb_rand_partition,
)
from amrsim.evaluate import spearman
from helpers import ilp_bruteforce

ASPECTS3 = ["Smatch", "WLK", "WWLK"]


def test_sb_full_predict():
    e = np.array([1.0, 2.0, 3.0])
    assert np.all(sb_full_predict(e, e, 5) == 1.0)
    a = np.array([1.0, 0.0])
    b = np.array([0.0, 1.0])
    assert np.all(sb_full_predict(a, b, 4) == 0.0)
    rng = np.random.default_rng(0)
    preds = sb_full_predict(rng.standard_normal(6), rng.standard_normal(6), 3)
    assert len(set(preds.tolist())) == 1


def test_sb_rand_partition_exact_cover():
    assignment = sb_rand_partition(48, 16, ASPECTS3, seed=0)
    assignment.validate()
    all_dims = sorted(i for idx in assignment.dims.values() for i in idx)
    assert all_dims == list(range(48))


def test_sb_rand_partition_seeding():
    a = sb_rand_partition(64, 16, ASPECTS3, seed=1)
    b = sb_rand_partition(64, 16, ASPECTS3, seed=1)
    c = sb_rand_partition(64, 16, ASPECTS3, seed=2)
    assert a.dims == b.dims
    assert a.dims != c.dims
    for assign in (a, c):
        assign.validate()


def test_sb_rand_partition_infeasible():
    with pytest.raises(InfeasiblePartition):
        sb_rand_partition(32, 16, ASPECTS3, seed=0)


def test_correlation_weights_known_rankings():
    rng = np.random.default_rng(5)
    n = 30
    e1 = rng.standard_normal((n, 4))
    e2 = rng.standard_normal((n, 4))
    prod = e1 * e2
    metrics = np.empty((n, 2))
    metrics[:, 0] = prod[:, 0]          # dimension 0 ranks exactly like metric 0
    metrics[:, 1] = -prod[:, 1]         # dimension 1 anti-ranks metric 1
    omega = correlation_weights(e1, e2, metrics)
    assert omega[0, 0] == pytest.approx(1.0)
    assert omega[1, 1] == pytest.approx(-1.0)
    assert np.all(omega <= 1.0) and np.all(omega >= -1.0)
    for i in range(4):
        for j in range(2):
            assert omega[i, j] == pytest.approx(
                spearman(prod[:, i], metrics[:, j]), abs=1e-12
            )


def test_correlation_weights_constant_column_is_zero():
    e1 = np.ones((5, 2))
    e2 = np.ones((5, 2))
    metrics = np.linspace(0, 1, 5).reshape(5, 1)
    omega = correlation_weights(e1, e2, metrics)
    assert np.all(omega == 0.0)


def test_ilp_matches_bruteforce_random():
    rng = np.random.default_rng(7)
    for _ in range(30):
        d = int(rng.integers(3, 9))
        k = int(rng.integers(1, 4))
        omega = rng.uniform(-1, 1, size=(d, k))
        assignment = ilp_partition(omega, ["a%d" % j for j in range(k)])
        assignment.validate()
        value = assignment.objective(omega, ["a%d" % j for j in range(k)])
        assert value == pytest.approx(ilp_bruteforce(omega), abs=1e-9)


def test_ilp_equal_weights_returns_valid_cover():
    omega = np.full((6, 3), 0.25)
    assignment = ilp_partition(omega, ASPECTS3)
    assignment.validate()
    assert set(assignment.dims) == set(ASPECTS3)


def test_ilp_infeasible():
    with pytest.raises(InfeasiblePartition):
        ilp_partition(np.zeros((2, 3)), ASPECTS3)


def test_ilp_beats_random_assignment():
    rng = np.random.default_rng(3)
    omega = rng.uniform(-1, 1, size=(12, 3))
    ilp = ilp_partition(omega, ASPECTS3)
    rand = sb_rand_partition(12, 4, ASPECTS3, seed=0)
    assert ilp.objective(omega, ASPECTS3) >= rand.objective(omega, ASPECTS3) - 1e-12


def test_assignment_json_roundtrip():
    assignment = sb_rand_partition(24, 8, ASPECTS3, seed=4)
    text = assignment.to_json()
    decoded = DimensionAssignment.from_json(text, n_dims=24)
    assert decoded.dims == assignment.dims
    assert json.loads(text).keys() == assignment.dims.keys()


def test_assignment_predict_slices():
    assignment = DimensionAssignment(n_dims=4, dims={"a": [0, 1], "b": [2, 3]})
    e = np.array([1.0, 0.0, 3.0, 4.0])
    preds = assignment.predict(e, e)
    assert np.allclose(preds, 1.0)
