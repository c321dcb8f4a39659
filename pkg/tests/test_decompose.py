import numpy as np
import pytest

from amrsim.aspects import ASPECT_NAMES
from amrsim.decompose import (
    PartitionMap,
    ProjectionModel,
    consistency_loss,
    cosine,
    decomposition_loss,
    global_loss,
    gradients,
    make_partition,
    predict_metrics,
)


def small_model(d=8, h=2, K=2, seed=None):
    part = make_partition(d, h, aspects=ASPECT_NAMES[:K])
    if seed is None:
        return ProjectionModel(part)
    rng = np.random.default_rng(seed)
    W = np.eye(d) + 0.2 * rng.standard_normal((d, d))
    betas = 1.0 + 0.3 * rng.standard_normal(K)
    return ProjectionModel(part, W, betas)


def test_make_partition_reference_layout():
    part = make_partition(384, 16)
    assert part.K == 15
    assert part.ranges[0] == (0, 16)
    assert part.ranges[-1] == (224, 240)
    assert part.residual == (240, 384)
    assert part.residual[1] - part.residual[0] == 144


def test_make_partition_errors_and_degenerate():
    with pytest.raises(ValueError, match="exceeds"):
        make_partition(32, 16, aspects=["a", "b", "c"])
    empty = make_partition(10, 4, aspects=[])
    assert empty.K == 0
    assert empty.residual == (0, 10)


def test_partition_invariants_checked():
    with pytest.raises(ValueError, match="cover"):
        PartitionMap(d=8, h=2, aspects=("a",), ranges=((0, 2),), residual=(3, 8))
    with pytest.raises(ValueError, match="cover"):
        PartitionMap(d=8, h=2, aspects=("a", "b"), ranges=((0, 2), (1, 3)),
                     residual=(3, 8))


def test_cosine():
    assert cosine([1.0, 2.0], [1.0, 2.0]) == pytest.approx(1.0)
    assert cosine([1.0, 0.0], [0.0, 1.0]) == 0.0
    assert cosine([1.0, 1.0], [1.0, 0.0]) == pytest.approx(1 / np.sqrt(2))
    with pytest.raises(ValueError, match="zero-norm"):
        cosine([0.0, 0.0], [1.0, 0.0])


def test_predict_metrics_identity_and_slices():
    model = small_model()
    e = np.arange(1.0, 9.0)
    assert np.allclose(predict_metrics(model, e, e), 1.0)
    e2 = e.copy()
    e2[2:4] = [-e[3], e[2]]  # orthogonal on aspect-1 slice only
    p = predict_metrics(model, e, e2)
    assert p[0] == pytest.approx(1.0)
    assert p[1] == pytest.approx(0.0, abs=1e-12)


def test_predict_metrics_matches_slice_oracle():
    rng = np.random.default_rng(3)
    model = small_model(seed=5)
    for _ in range(10):
        e = rng.standard_normal(8)
        e2 = rng.standard_normal(8)
        p = predict_metrics(model, e, e2)
        t1 = model.W @ e
        t2 = model.W @ e2
        for k, (start, end) in enumerate(model.partition.ranges):
            u, v = t1[start:end], t2[start:end]
            expected = float(u @ v / (np.linalg.norm(u) * np.linalg.norm(v)))
            assert p[k] == pytest.approx(expected, abs=1e-12)


def test_decomposition_loss_formula():
    model = small_model(d=4, h=4, K=1)
    e = np.array([1.0, 0.0, 0.0, 0.0])
    # P = 1 against itself; M = 1, beta = 1 -> 0
    assert decomposition_loss(model, e, e, [1.0]) == 0.0
    # K=1, M=1, beta=1, P=0.5
    e2 = np.array([0.5, np.sqrt(1 - 0.25), 0.0, 0.0])
    assert decomposition_loss(model, e, e2, [1.0]) == pytest.approx(0.25)
    model.betas[:] = 2.0
    assert decomposition_loss(model, e, e2, [1.0]) == pytest.approx(0.0)


def test_beta_closed_form_minimizer():
    rng = np.random.default_rng(11)
    model = small_model(seed=7)
    e = rng.standard_normal(8)
    e2 = rng.standard_normal(8)
    p = predict_metrics(model, e, e2)
    m = rng.uniform(0.1, 1.0, 2)
    model.betas = m / p  # per-aspect closed form when P_k != 0
    assert decomposition_loss(model, e, e2, m) == pytest.approx(0.0, abs=1e-20)


def test_consistency_identity_exact_zero():
    model = small_model()
    rng = np.random.default_rng(0)
    batch = rng.standard_normal((5, 8))
    assert consistency_loss(model, batch) == 0.0


def test_consistency_orthogonal_invariance():
    rng = np.random.default_rng(1)
    q, _ = np.linalg.qr(rng.standard_normal((8, 8)))
    model = small_model()
    model.W = q
    batch = rng.standard_normal((6, 8))
    assert consistency_loss(model, batch) == pytest.approx(0.0, abs=1e-25)


def test_consistency_counts_ordered_pairs():
    model = small_model(seed=9)
    rng = np.random.default_rng(2)
    batch = rng.standard_normal((2, 8))
    # explicit double loop over the 4 ordered pairs, self-pairs included
    def cos(u, v):
        return u @ v / (np.linalg.norm(u) * np.linalg.norm(v))
    total = 0.0
    transformed = batch @ model.W.T
    for i in range(2):
        for j in range(2):
            total += (cos(batch[i], batch[j]) - cos(transformed[i], transformed[j])) ** 2
    assert consistency_loss(model, batch) == pytest.approx(total / 4.0, rel=1e-12)


def test_global_loss_composition():
    model = small_model(seed=13)
    rng = np.random.default_rng(4)
    e1 = rng.standard_normal((3, 8))
    e2 = rng.standard_normal((3, 8))
    m = rng.uniform(0.0, 1.0, (3, 2))
    dec = np.mean([decomposition_loss(model, e1[i], e2[i], m[i]) for i in range(3)])
    cons = consistency_loss(model, np.vstack([e1, e2]))
    assert global_loss(model, e1, e2, m, alpha=1.0) == pytest.approx(dec + cons)
    assert global_loss(model, e1, e2, m, alpha=0.0) == pytest.approx(cons)
    assert global_loss(model, e1, e2, m, alpha=2.0, cons_weight=0.0) == pytest.approx(2 * dec)


def test_perfect_model_zero_loss():
    model = small_model()
    rng = np.random.default_rng(5)
    e1 = rng.standard_normal((4, 8))
    e2 = rng.standard_normal((4, 8))
    m = np.array([predict_metrics(model, e1[i], e2[i]) for i in range(4)])
    assert global_loss(model, e1, e2, m) == pytest.approx(0.0, abs=1e-28)


def test_gradients_zero_at_zero_loss():
    model = small_model()
    rng = np.random.default_rng(6)
    e1 = rng.standard_normal((3, 8))
    m = np.ones((3, 2))
    dw, db = gradients(model, e1, e1.copy(), m)
    assert np.linalg.norm(dw) <= 1e-10
    assert np.linalg.norm(db) <= 1e-10


def _numeric_gradients(model, e1, e2, m, alpha, cons_weight, step=1e-5):
    dw = np.zeros_like(model.W)
    for i in range(model.d):
        for j in range(model.d):
            up = model.copy()
            up.W[i, j] += step
            down = model.copy()
            down.W[i, j] -= step
            dw[i, j] = (
                global_loss(up, e1, e2, m, alpha, cons_weight)
                - global_loss(down, e1, e2, m, alpha, cons_weight)
            ) / (2 * step)
    db = np.zeros_like(model.betas)
    for k in range(model.K):
        up = model.copy()
        up.betas[k] += step
        down = model.copy()
        down.betas[k] -= step
        db[k] = (
            global_loss(up, e1, e2, m, alpha, cons_weight)
            - global_loss(down, e1, e2, m, alpha, cons_weight)
        ) / (2 * step)
    return dw, db


def test_gradients_match_finite_differences():
    rng = np.random.default_rng(8)
    for trial in range(5):
        model = small_model(seed=20 + trial)
        e1 = rng.standard_normal((3, 8))
        e2 = rng.standard_normal((3, 8))
        m = rng.uniform(0.0, 1.0, (3, 2))
        dw, db = gradients(model, e1, e2, m, alpha=1.0, cons_weight=1.0)
        ndw, ndb = _numeric_gradients(model, e1, e2, m, 1.0, 1.0)
        denom = np.maximum(np.maximum(np.abs(ndw), np.abs(dw)), 1e-8)
        assert np.max(np.abs(dw - ndw) / denom) < 1e-4
        denom_b = np.maximum(np.maximum(np.abs(ndb), np.abs(db)), 1e-8)
        assert np.max(np.abs(db - ndb) / denom_b) < 1e-4


def test_beta_gradient_closed_form():
    # d(beta_k) = -(2/K) * mean_i (M_ik - beta_k P_ik) * P_ik for alpha=1
    model = small_model(seed=31)
    rng = np.random.default_rng(9)
    e1 = rng.standard_normal((4, 8))
    e2 = rng.standard_normal((4, 8))
    m = rng.uniform(0.0, 1.0, (4, 2))
    p = np.array([predict_metrics(model, e1[i], e2[i]) for i in range(4)])
    expected = np.mean(-2.0 * (m - model.betas * p) * p, axis=0) / model.K
    _, db = gradients(model, e1, e2, m, alpha=1.0, cons_weight=0.0)
    assert np.allclose(db, expected, atol=1e-12)


def test_checkpoint_roundtrip(tmp_path):
    model = small_model(seed=41)
    path = tmp_path / "model.ckpt"
    model.save(path)
    blob = path.read_bytes()
    assert blob[:4] == b"S3P1"
    again = ProjectionModel.load(path)
    assert np.array_equal(again.W, model.W)
    assert np.array_equal(again.betas, model.betas)
    assert again.partition == model.partition
    # byte determinism
    path2 = tmp_path / "model2.ckpt"
    again.save(path2)
    assert path2.read_bytes() == blob


def test_losses_nonnegative_random():
    rng = np.random.default_rng(10)
    for _ in range(10):
        model = small_model(seed=int(rng.integers(0, 100)))
        e1 = rng.standard_normal((3, 8))
        e2 = rng.standard_normal((3, 8))
        m = rng.uniform(0.0, 1.0, (3, 2))
        assert global_loss(model, e1, e2, m) >= 0.0
        assert consistency_loss(model, e1) >= 0.0
