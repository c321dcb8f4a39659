"""Shared test fixtures: random graph generation and independent oracles.

The oracles here deliberately re-derive results from first principles
(exhaustive enumeration, vertex enumeration, brute force) so that they
share no search logic with the library code they check.
"""

import itertools

import numpy as np

from amrsim.embfile import write_embeddings
from amrsim.graph import AmrGraph, extract_triples

CONCEPTS = [
    "want-01", "go-02", "see-01", "like-01", "run-02",
    "boy", "girl", "dog", "cat", "city", "name", "thing", "person",
]
ROLES = ["ARG0", "ARG1", "ARG2", "mod", "time", "location", "manner", "name"]
QUANTS = ["1", "2", "3", "many"]
NAME_OPS = ['"Rex"', '"Anna"', '"Bonn"']


def random_graph(rng, max_vars=6, prefix="v") -> AmrGraph:
    """A random small AMR graph: a labeled tree plus occasional re-entrancy
    and attribute leaves.  Concepts collide on purpose so alignment search
    is non-trivial."""
    nv = rng.randint(1, max_vars)
    names = ["%s%d" % (prefix, i) for i in range(nv)]
    nodes = {n: rng.choice(CONCEPTS) for n in names}
    edges = []
    for i in range(1, nv):
        parent = names[rng.randrange(i)]
        edges.append((parent, rng.choice(ROLES), names[i]))
    if nv >= 3 and rng.random() < 0.4:  # re-entrant edge, forward to stay acyclic
        s = rng.randrange(nv - 1)
        t = rng.randrange(s + 1, nv)
        edges.append((names[s], rng.choice(ROLES), names[t]))
    for n in names:
        r = rng.random()
        if r < 0.15:
            edges.append((n, "polarity", "-"))
        elif r < 0.30:
            edges.append((n, "quant", rng.choice(QUANTS)))
        elif r < 0.40:
            edges.append((n, "op1", rng.choice(NAME_OPS)))
        elif r < 0.45:
            edges.append((n, "wiki", '"Q%d"' % rng.randint(1, 5)))
    return AmrGraph(root=names[0], nodes=nodes, edges=edges)


def mutate_graph(rng, g: AmrGraph, prefix="w") -> AmrGraph:
    """A renamed copy with light perturbations (concept swaps, attribute
    drops, role changes); connectivity is preserved."""
    rename = {v: "%s%d" % (prefix, i) for i, v in enumerate(sorted(g.nodes))}
    nodes = {rename[v]: c for v, c in g.nodes.items()}
    edges = []
    for s, r, t in g.edges:
        if t not in g.nodes and rng.random() < 0.3:
            continue  # drop an attribute
        role = rng.choice(ROLES) if rng.random() < 0.2 else r
        edges.append((rename[s], role, rename.get(t, t)))
    for v in list(nodes):
        if rng.random() < 0.25:
            nodes[v] = rng.choice(CONCEPTS)
    return AmrGraph(root=rename[g.root], nodes=nodes, edges=edges)


def random_pair(rng, max_vars=6):
    a = random_graph(rng, max_vars, prefix="v")
    if rng.random() < 0.6:
        return a, mutate_graph(rng, a)
    return a, random_graph(rng, max_vars, prefix="w")


def smatch_oracle(a: AmrGraph, b: AmrGraph) -> float:
    """Exhaustive enumeration over all injective variable alignments."""
    ta, tb = extract_triples(a), extract_triples(b)
    vars_a = sorted(a.nodes)
    vars_b = sorted(b.nodes)
    tb_inst = {(t.source, t.target) for t in tb.instances}
    tb_attr = {(t.source, t.label, t.target) for t in tb.attributes}
    tb_rel = {(t.source, t.label, t.target) for t in tb.relations}

    def count(mapping):
        n = 0
        for t in ta.instances:
            m = mapping.get(t.source)
            if m is not None and (m, t.target) in tb_inst:
                n += 1
        for t in ta.attributes:
            m = mapping.get(t.source)
            if m is not None and (m, t.label, t.target) in tb_attr:
                n += 1
        for t in ta.relations:
            ms = mapping.get(t.source)
            mt = mapping.get(t.target)
            if ms is not None and mt is not None and (ms, t.label, mt) in tb_rel:
                n += 1
        return n

    best = 0
    mapping = {}
    used = set()

    def rec(i):
        nonlocal best
        if i == len(vars_a):
            best = max(best, count(mapping))
            return
        rec(i + 1)  # leave vars_a[i] unmapped
        for vb in vars_b:
            if vb not in used:
                mapping[vars_a[i]] = vb
                used.add(vb)
                rec(i + 1)
                del mapping[vars_a[i]]
                used.remove(vb)

    rec(0)
    if len(ta) + len(tb) == 0:
        return 1.0
    return 2.0 * best / (len(ta) + len(tb))


def transport_oracle(cost: np.ndarray, p=None, q=None) -> float:
    """Minimum transport cost by enumerating vertices of the polytope.

    Basic feasible solutions have at most m+n-1 support entries; every
    support set of that size whose linear system has a feasible solution
    is a vertex candidate.
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
    a_full = np.array(rows)[:-1]
    b_full = np.concatenate([p, q])[:-1]
    k = m + n - 1
    flat_cost = cost.ravel()
    best = np.inf
    for cols in itertools.combinations(range(m * n), k):
        sub = a_full[:, cols]
        try:
            x = np.linalg.solve(sub, b_full)
        except np.linalg.LinAlgError:
            continue
        if np.all(x >= -1e-10) and np.allclose(sub @ x, b_full, atol=1e-10):
            best = min(best, float(flat_cost[list(cols)] @ np.maximum(x, 0.0)))
    return best


def ilp_bruteforce(omega: np.ndarray) -> float:
    """Best feasible assignment objective by enumerating all choices."""
    omega = np.asarray(omega, dtype=np.float64)
    d, K = omega.shape
    choices = np.array(list(itertools.product(range(K + 1), repeat=d)))
    aug = np.hstack([np.zeros((d, 1)), omega])
    values = aug[np.arange(d)[None, :], choices].sum(axis=1)
    feasible = np.ones(len(choices), dtype=bool)
    for j in range(1, K + 1):
        feasible &= (choices == j).any(axis=1)
    return float(values[feasible].max())


def write_emb_fixture(path, sentences, dim=48, seed=0) -> np.ndarray:
    """Deterministic synthetic EMB1 file plus sidecar."""
    rng = np.random.default_rng(seed)
    matrix = rng.standard_normal((len(sentences), dim)).astype(np.float32)
    write_embeddings(path, matrix, sentences)
    return matrix


TINY_CORPUS = [
    "(c / cat)",
    "(l / like-01 :polarity - :ARG0 (m / man) :ARG1 (c / cheese))",
    "(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02 :ARG0 b))",
    '(c / city :name (n / name :op1 "Bonn") :wiki "Q586")',
    "(s / see-01 :ARG0 (p / person :quant 3) :ARG1 p :time (y / yesterday))",
    "(a / and :op1 (r / run-02 :ARG0 (d / dog)) :op2 (j / jump-03 :ARG0 d))",
]
