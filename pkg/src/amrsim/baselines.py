"""Partitioning baselines: full-embedding, random, and correlation-optimal.

The correlation-optimal partition maximizes the summed dimension-aspect
correlation subject to (i) each dimension feeding at most one aspect and
(ii) each aspect receiving at least one dimension.  It is solved exactly:
every dimension takes its best positive-correlation aspect (or stays
unassigned), and coverage is repaired by a min-cost rectangular assignment
that picks one representative dimension per aspect.  Any feasible solution
can be rewritten in that representative form without losing value, so the
result is a certified optimum (the tests check it against brute force).
"""

import json
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from amrsim.decompose import cosine
from amrsim.evaluate import DegenerateInput, spearman


class InfeasiblePartition(ValueError):
    """Raised when the requested assignment cannot satisfy its constraints."""


@dataclass
class DimensionAssignment:
    """Disjoint dimension sets per aspect; unlisted dimensions are unassigned."""

    n_dims: int
    dims: dict  # aspect name -> sorted list of dimension indices

    def validate(self):
        seen = set()
        for aspect, idx in self.dims.items():
            if not idx:
                raise InfeasiblePartition("aspect %r received no dimension" % aspect)
            for i in idx:
                if not 0 <= i < self.n_dims:
                    raise InfeasiblePartition("dimension %d out of range" % i)
                if i in seen:
                    raise InfeasiblePartition("dimension %d assigned twice" % i)
                seen.add(i)

    def objective(self, omega: np.ndarray, aspects) -> float:
        """Summed correlation weight of this assignment under ``omega``."""
        col = {a: j for j, a in enumerate(aspects)}
        return float(
            sum(omega[i, col[a]] for a, idx in self.dims.items() for i in idx)
        )

    def to_json(self) -> str:
        return json.dumps({a: list(map(int, idx)) for a, idx in self.dims.items()},
                          indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str, n_dims: int) -> "DimensionAssignment":
        dims = {a: sorted(int(i) for i in idx) for a, idx in json.loads(text).items()}
        assignment = cls(n_dims=n_dims, dims=dims)
        assignment.validate()
        return assignment

    def predict(self, e, e2) -> np.ndarray:
        """Per-aspect cosine of the assigned dimension subsets."""
        e = np.asarray(e, dtype=np.float64)
        e2 = np.asarray(e2, dtype=np.float64)
        return np.array([cosine(e[idx], e2[idx]) for idx in self.dims.values()])

    @property
    def aspect_names(self):
        return list(self.dims)


def sb_full_predict(e, e2, n_aspects: int) -> np.ndarray:
    """No partitioning: every aspect receives the full-embedding cosine."""
    return np.full(n_aspects, cosine(e, e2))


def sb_rand_partition(d: int, h: int, aspects, seed: int = 0) -> DimensionAssignment:
    """Uniformly sample disjoint h-subsets of dimensions, one per aspect."""
    aspects = list(aspects)
    if len(aspects) * h > d:
        raise InfeasiblePartition(
            "cannot place %d aspects x %d dims in %d dimensions" % (len(aspects), h, d)
        )
    rng = np.random.default_rng(seed)
    perm = rng.permutation(d)
    dims = {
        a: sorted(int(i) for i in perm[k * h : (k + 1) * h])
        for k, a in enumerate(aspects)
    }
    assignment = DimensionAssignment(n_dims=d, dims=dims)
    assignment.validate()
    return assignment


def correlation_weights(e1: np.ndarray, e2: np.ndarray, metrics: np.ndarray) -> np.ndarray:
    """Spearman correlation of per-pair dimension products vs aspect scores.

    The per-dimension statistic of a pair is the product of the two
    sentences' values in that dimension (its contribution to the raw dot
    product).  Constant columns get weight 0 by convention.
    """
    e1 = np.asarray(e1, dtype=np.float64)
    e2 = np.asarray(e2, dtype=np.float64)
    metrics = np.asarray(metrics, dtype=np.float64)
    if e1.shape[0] < 3:
        raise ValueError("need at least 3 development instances")
    prod = e1 * e2
    d = prod.shape[1]
    K = metrics.shape[1]
    omega = np.zeros((d, K))
    for i in range(d):
        for j in range(K):
            try:
                omega[i, j] = spearman(prod[:, i], metrics[:, j])
            except DegenerateInput:
                omega[i, j] = 0.0
    return omega


def ilp_partition(omega: np.ndarray, aspects) -> DimensionAssignment:
    """Exact correlation-optimal assignment of dimensions to aspects."""
    omega = np.asarray(omega, dtype=np.float64)
    aspects = list(aspects)
    d, K = omega.shape
    if K != len(aspects):
        raise ValueError("omega has %d aspect columns for %d aspects" % (K, len(aspects)))
    if d < K:
        raise InfeasiblePartition(
            "%d dimensions cannot cover %d aspects" % (d, K)
        )
    best_value = np.maximum(omega.max(axis=1), 0.0)   # per-dimension greedy value
    greedy_choice = np.where(omega.max(axis=1) > 0.0, omega.argmax(axis=1), -1)
    # representative repair: pick one dimension per aspect minimizing lost value
    cost = best_value[:, None] - omega  # cost[i, j] >= 0
    rows, cols = linear_sum_assignment(cost.T)  # rows: aspects, cols: dimensions
    representative = {int(c): int(r) for r, c in zip(rows, cols)}

    dims = {a: [] for a in aspects}
    for i in range(d):
        if i in representative:
            dims[aspects[representative[i]]].append(i)
        elif greedy_choice[i] >= 0:
            dims[aspects[greedy_choice[i]]].append(i)
    dims = {a: sorted(idx) for a, idx in dims.items()}
    assignment = DimensionAssignment(n_dims=d, dims=dims)
    assignment.validate()
    return assignment
