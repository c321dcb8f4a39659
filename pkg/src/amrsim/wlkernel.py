"""Weisfeiler-Leman graph kernels over AMR graphs.

``wlk`` compares iteratively relabeled node-context multisets with cosine
similarity.  ``wwlk`` embeds nodes continuously (word vectors with a
deterministic hash fallback), averages neighbourhood-aggregated vectors
over the iterations, and scores 1/(1+D) where D is the exact 1-Wasserstein
distance between the two uniform node distributions.

Constant leaves participate as nodes (one per attribute edge), so negation
markers and name strings contribute structure.
"""

import hashlib
from collections import Counter

import numpy as np
from scipy.optimize import linprog

from amrsim.graph import AmrGraph
from amrsim.wordvec import WordVectorTable, strip_sense

DEFAULT_ITERATIONS = 2
HASH_VECTOR_DIM = 32


def _label_graph(g: AmrGraph):
    """Node labels plus (role, neighbour) adjacency in both directions.

    Roles carry a direction marker (">" outgoing, "<" incoming) so directed
    structure survives relabeling.  Each attribute edge contributes its own
    leaf node so equal constants in different positions stay distinct.
    """
    labels = dict(g.nodes)
    adjacency = {v: [] for v in g.nodes}
    leaf = 0
    for s, r, t in g.edges:
        if t in g.nodes:
            u = t
        else:
            u = "_const%d" % leaf
            leaf += 1
            labels[u] = t
            adjacency[u] = []
        adjacency[s].append((r + ">", u))
        adjacency[u].append((r + "<", s))
    return labels, adjacency


def wl_features(g: AmrGraph, iterations: int = DEFAULT_ITERATIONS):
    """Per-iteration label multisets (iteration 0 = raw labels).

    Iteration t+1 relabels each node from its own label and the sorted
    multiset of (edge label, neighbour label) pairs over incident edges in
    both directions.  Returns a list of ``iterations + 1`` Counters.
    """
    if iterations < 0:
        raise ValueError("iterations must be non-negative")
    labels, adjacency = _label_graph(g)
    bags = [Counter(labels.values())]
    for _ in range(iterations):
        new_labels = {}
        for v, lab in labels.items():
            context = sorted((r, labels[u]) for r, u in adjacency[v])
            raw = lab + "|" + ";".join("%s,%s" % p for p in context)
            new_labels[v] = hashlib.md5(raw.encode("utf-8")).hexdigest()
        labels = new_labels
        bags.append(Counter(labels.values()))
    return bags


def wlk(a: AmrGraph, a2: AmrGraph, iterations: int = DEFAULT_ITERATIONS) -> float:
    """Cosine similarity of the concatenated per-iteration feature counts."""
    bags_a = wl_features(a, iterations)
    bags_b = wl_features(a2, iterations)
    if bags_a == bags_b:
        return 1.0  # isomorphic feature bags score exactly 1
    dot = 0.0
    norm_a = 0.0
    norm_b = 0.0
    for ca, cb in zip(bags_a, bags_b):
        for label in set(ca) | set(cb):
            x = ca.get(label, 0)
            y = cb.get(label, 0)
            dot += x * y
            norm_a += x * x
            norm_b += y * y
    if norm_a == 0.0 or norm_b == 0.0:
        return 1.0 if norm_a == norm_b else 0.0
    return float(np.clip(dot / np.sqrt(norm_a * norm_b), 0.0, 1.0))


def hash_unit_vector(token: str, dim: int = HASH_VECTOR_DIM) -> np.ndarray:
    """Deterministic unit vector for out-of-vocabulary labels."""
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
    rng = np.random.default_rng(int.from_bytes(digest, "little"))
    v = rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def node_embeddings(
    g: AmrGraph,
    iterations: int = DEFAULT_ITERATIONS,
    vectors: WordVectorTable = None,
) -> np.ndarray:
    """Continuous WL node embeddings: the T-step average of
    neighbourhood-aggregated label vectors, one row per node."""
    labels, adjacency = _label_graph(g)
    order = sorted(labels)
    dim = vectors.dim if vectors is not None else HASH_VECTOR_DIM

    def label_vector(label):
        token = strip_sense(label)
        if vectors is not None:
            v = vectors.get(token)
            if v is not None:
                return np.asarray(v, dtype=np.float64)
        return hash_unit_vector(token, dim)

    x = np.stack([label_vector(labels[v]) for v in order])
    index = {v: i for i, v in enumerate(order)}
    total = x.copy()
    for _ in range(iterations):
        nxt = x.copy()
        for v in order:
            nbrs = [index[u] for _, u in adjacency[v]]
            if nbrs:
                nxt[index[v]] = 0.5 * x[index[v]] + 0.5 * x[nbrs].mean(axis=0)
        x = nxt
        total += x
    return total / (iterations + 1)


def transport_cost(cost: np.ndarray, p: np.ndarray = None, q: np.ndarray = None) -> float:
    """Exact optimal transport cost between discrete distributions.

    Solves the transport linear program exactly (graphs are small, so the
    LP is tiny); marginals default to uniform.
    """
    cost = np.asarray(cost, dtype=np.float64)
    m, n = cost.shape
    p = np.full(m, 1.0 / m) if p is None else np.asarray(p, dtype=np.float64)
    q = np.full(n, 1.0 / n) if q is None else np.asarray(q, dtype=np.float64)
    rows = []
    for i in range(m):
        a = np.zeros((m, n))
        a[i, :] = 1.0
        rows.append(a.ravel())
    for j in range(n):
        a = np.zeros((m, n))
        a[:, j] = 1.0
        rows.append(a.ravel())
    a_eq = np.array(rows)[:-1]  # drop one redundant marginal constraint
    b_eq = np.concatenate([p, q])[:-1]
    res = linprog(cost.ravel(), A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if not res.success:
        raise RuntimeError("transport LP failed: %s" % res.message)
    return float(res.fun)


def wwlk(
    a: AmrGraph,
    a2: AmrGraph,
    iterations: int = DEFAULT_ITERATIONS,
    vectors: WordVectorTable = None,
) -> float:
    """Wasserstein WL similarity 1/(1+D) in (0, 1]."""
    ha = node_embeddings(a, iterations, vectors)
    hb = node_embeddings(a2, iterations, vectors)
    # identical node-embedding multisets have distance exactly 0
    if ha.shape == hb.shape:
        sa = ha[np.lexsort(ha.T)]
        sb = hb[np.lexsort(hb.T)]
        if np.array_equal(sa, sb):
            return 1.0
    cost = np.sqrt(
        np.maximum(
            ((ha[:, None, :] - hb[None, :, :]) ** 2).sum(axis=2),
            0.0,
        )
    )
    return 1.0 / (1.0 + transport_cost(cost))
