"""Partitioned sentence-embedding decomposition over a frozen teacher.

A trainable square matrix W maps frozen teacher embeddings to structured
embeddings whose contiguous slices (one per metric aspect, plus a
residual) carry aspect-specific similarity.  Per-aspect scalars scale the
slice cosines onto each metric's range.

Two losses drive training:
  * decomposition: mean squared error between scaled slice cosines and
    the target metric vector;
  * consistency: mean squared difference between teacher cosines and
    transformed cosines over all ordered pairs of a batch, which anchors
    the overall similarity to the frozen teacher.

W starts at the identity and the scalars at 1, so the initial consistency
loss is exactly zero.  Gradients are analytic and checked against finite
differences in the test suite.
"""

import struct
from dataclasses import dataclass

import numpy as np

from amrsim.aspects import ASPECT_NAMES

CHECKPOINT_MAGIC = b"S3P1"


@dataclass(frozen=True)
class PartitionMap:
    """Aspect -> half-open index range assignment over [0, d)."""

    d: int
    h: int
    aspects: tuple
    ranges: tuple          # one (start, end) per aspect, contiguous
    residual: tuple        # (start, end), length d - K*h

    def __post_init__(self):
        covered = []
        for start, end in list(self.ranges) + [self.residual]:
            if not (0 <= start <= end <= self.d):
                raise ValueError("range (%d, %d) outside [0, %d)" % (start, end, self.d))
            covered.extend(range(start, end))
        if sorted(covered) != list(range(self.d)):
            raise ValueError("aspect ranges plus residual must cover [0, d) without overlap")
        for start, end in self.ranges:
            if end - start != self.h:
                raise ValueError("every aspect range must have length h=%d" % self.h)

    @property
    def K(self) -> int:
        return len(self.ranges)

    def range_of(self, aspect) -> tuple:
        return self.ranges[self.aspects.index(aspect)]

    def slices(self):
        return [slice(start, end) for start, end in self.ranges]

    @property
    def residual_slice(self) -> slice:
        return slice(*self.residual)


def make_partition(d: int, h: int, aspects=None) -> PartitionMap:
    """Contiguous layout: aspect k gets [k*h, (k+1)*h); the tail is residual."""
    if aspects is None:
        aspects = ASPECT_NAMES
    aspects = tuple(aspects)
    K = len(aspects)
    if K * h > d:
        raise ValueError("K*h = %d exceeds embedding dimension %d" % (K * h, d))
    ranges = tuple((k * h, (k + 1) * h) for k in range(K))
    return PartitionMap(d=d, h=h, aspects=aspects, ranges=ranges,
                        residual=(K * h, d))


def cosine(u, v) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine of a zero-norm vector is undefined")
    return float(np.dot(u, v) / (nu * nv))


def _row_cosines(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    nu = np.linalg.norm(u, axis=1)
    nv = np.linalg.norm(v, axis=1)
    if np.any(nu == 0.0) or np.any(nv == 0.0):
        raise ValueError("zero-norm slice in batch")
    return np.einsum("ij,ij->i", u / nu[:, None], v / nv[:, None])


class ProjectionModel:
    """Square projection W plus per-aspect scalars over a PartitionMap."""

    def __init__(self, partition: PartitionMap, W=None, betas=None):
        self.partition = partition
        self.d = partition.d
        self.K = partition.K
        self.W = np.eye(self.d) if W is None else np.array(W, dtype=np.float64)
        self.betas = (
            np.ones(self.K) if betas is None else np.array(betas, dtype=np.float64)
        )
        if self.W.shape != (self.d, self.d):
            raise ValueError("W must be %dx%d" % (self.d, self.d))
        if self.betas.shape != (self.K,):
            raise ValueError("betas must have length %d" % self.K)

    def copy(self) -> "ProjectionModel":
        return ProjectionModel(self.partition, self.W.copy(), self.betas.copy())

    def transform(self, e: np.ndarray) -> np.ndarray:
        e = np.asarray(e, dtype=np.float64)
        return e @ self.W.T

    def sub_similarities(self, e, e2) -> np.ndarray:
        """Unscaled slice cosines P, one per aspect."""
        t1 = self.transform(e)
        t2 = self.transform(e2)
        return np.array([cosine(t1[s], t2[s]) for s in self.partition.slices()])

    def scaled_similarities(self, e, e2) -> np.ndarray:
        """The model's metric predictions: betas * P."""
        return self.betas * self.sub_similarities(e, e2)

    def residual_similarity(self, e, e2) -> float:
        s = self.partition.residual_slice
        if s.start == s.stop:
            raise ValueError("partition has an empty residual")
        t1 = self.transform(e)
        t2 = self.transform(e2)
        return cosine(t1[s], t2[s])

    def similarity(self, e, e2) -> float:
        """Overall cosine of the transformed embeddings."""
        return cosine(self.transform(e), self.transform(e2))

    def save(self, path) -> None:
        parts = [CHECKPOINT_MAGIC, struct.pack("<III", self.d, self.K, self.partition.h)]
        parts.append(np.ascontiguousarray(self.W, dtype="<f8").tobytes())
        parts.append(np.ascontiguousarray(self.betas, dtype="<f8").tobytes())
        for start, end in self.partition.ranges:
            parts.append(struct.pack("<II", start, end))
        parts.append(struct.pack("<II", *self.partition.residual))
        with open(path, "wb") as f:
            f.write(b"".join(parts))

    @classmethod
    def load(cls, path) -> "ProjectionModel":
        with open(path, "rb") as f:
            blob = f.read()
        if blob[:4] != CHECKPOINT_MAGIC:
            raise ValueError("not a projection checkpoint: %s" % path)
        d, K, h = struct.unpack_from("<III", blob, 4)
        off = 16
        W = np.frombuffer(blob, dtype="<f8", count=d * d, offset=off).reshape(d, d)
        off += d * d * 8
        betas = np.frombuffer(blob, dtype="<f8", count=K, offset=off)
        off += K * 8
        ranges = []
        for _ in range(K):
            ranges.append(struct.unpack_from("<II", blob, off))
            off += 8
        residual = struct.unpack_from("<II", blob, off)
        partition = PartitionMap(d=d, h=h, aspects=tuple(ASPECT_NAMES[:K]),
                                 ranges=tuple(ranges), residual=residual)
        return cls(partition, W.copy(), betas.copy())


def predict_metrics(model: ProjectionModel, e, e2) -> np.ndarray:
    """Unscaled per-aspect slice cosines P for one pair."""
    return model.sub_similarities(e, e2)


def decomposition_loss(model: ProjectionModel, e, e2, metrics) -> float:
    """Mean over aspects of (M_k - beta_k * P_k)^2 for one pair."""
    p = model.sub_similarities(e, e2)
    m = np.asarray(metrics, dtype=np.float64)
    return float(np.mean((m - model.betas * p) ** 2))


def consistency_loss(model: ProjectionModel, embeddings) -> float:
    """Mean squared cosine drift over all ordered pairs of the batch.

    The teacher side is the batch itself (the teacher is the frozen
    input), so a W that preserves all pairwise angles scores 0.
    """
    x = np.asarray(embeddings, dtype=np.float64)
    s0 = _cosine_matrix(x)
    s = _cosine_matrix(model.transform(x))
    return float(np.mean((s0 - s) ** 2))


def _cosine_matrix(x: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(x, axis=1)
    if np.any(norms == 0.0):
        raise ValueError("zero-norm row in batch")
    xh = x / norms[:, None]
    return xh @ xh.T


def global_loss(model: ProjectionModel, e1, e2, metrics,
                alpha: float = 1.0, cons_weight: float = 1.0) -> float:
    """alpha * mean decomposition loss + consistency over the union batch.

    ``cons_weight`` scales the consistency term (0 gives the
    decomposition-only ablation; ``alpha`` 0 the consistency-only one).
    """
    e1 = np.atleast_2d(np.asarray(e1, dtype=np.float64))
    e2 = np.atleast_2d(np.asarray(e2, dtype=np.float64))
    m = np.atleast_2d(np.asarray(metrics, dtype=np.float64))
    dec = _batch_decomposition_loss(model, e1, e2, m)
    union = np.vstack([e1, e2])
    return float(alpha * dec + cons_weight * consistency_loss(model, union))


def _batch_decomposition_loss(model, e1, e2, m) -> float:
    t1 = model.transform(e1)
    t2 = model.transform(e2)
    total = 0.0
    for k, s in enumerate(model.partition.slices()):
        c = _row_cosines(t1[:, s], t2[:, s])
        total += np.mean((m[:, k] - model.betas[k] * c) ** 2)
    return total / model.K


def gradients(model: ProjectionModel, e1, e2, metrics,
              alpha: float = 1.0, cons_weight: float = 1.0):
    """Analytic gradients of the global loss w.r.t. W and betas."""
    e1 = np.atleast_2d(np.asarray(e1, dtype=np.float64))
    e2 = np.atleast_2d(np.asarray(e2, dtype=np.float64))
    m = np.atleast_2d(np.asarray(metrics, dtype=np.float64))
    b = e1.shape[0]
    d = model.d
    dw = np.zeros((d, d))
    dbetas = np.zeros(model.K)

    # decomposition term: alpha / (b*K) * sum_i (M_ik - beta_k c_ik)^2
    t1 = e1 @ model.W.T
    t2 = e2 @ model.W.T
    scale = alpha / (b * model.K)
    for k, s in enumerate(model.partition.slices()):
        u = t1[:, s]
        v = t2[:, s]
        ru = np.linalg.norm(u, axis=1)
        rv = np.linalg.norm(v, axis=1)
        if np.any(ru == 0.0) or np.any(rv == 0.0):
            raise ValueError("zero-norm slice in batch")
        uh = u / ru[:, None]
        vh = v / rv[:, None]
        c = np.einsum("ij,ij->i", uh, vh)
        resid = m[:, k] - model.betas[k] * c
        dbetas[k] = scale * np.sum(-2.0 * resid * c)
        gc = scale * (-2.0 * model.betas[k] * resid)
        du = (gc / ru)[:, None] * (vh - c[:, None] * uh)
        dv = (gc / rv)[:, None] * (uh - c[:, None] * vh)
        dw[s, :] += du.T @ e1 + dv.T @ e2

    # consistency term over the union batch of all 2b embeddings
    if cons_weight != 0.0:
        x = np.vstack([e1, e2])
        n = x.shape[0]
        rx = np.linalg.norm(x, axis=1)
        xh = x / rx[:, None]
        p = x @ model.W.T
        rp = np.linalg.norm(p, axis=1)
        if np.any(rp == 0.0):
            raise ValueError("zero-norm transformed row in batch")
        ph = p / rp[:, None]
        s0 = xh @ xh.T
        s = ph @ ph.T
        a = s0 - s
        coef = -4.0 * cons_weight / (n * n)
        gp = coef / rp[:, None] * (a @ ph - ((a * s).sum(axis=1))[:, None] * ph)
        dw += gp.T @ x

    return dw, dbetas
