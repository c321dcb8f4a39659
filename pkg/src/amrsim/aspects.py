"""Fine-grained AMR similarity metrics and the per-pair metric vector.

Seven aspect scores are Smatch F-scores on filtered triple subsets,
evaluated under the whole-graph alignment restricted to the projected
triples.  When a projection is empty on both sides the aspect scores 1.00
(the graphs vacuously agree); when exactly one side is empty it scores 0.

The canonical aspect ordering below is fixed; every metric vector and
every serialized score table uses it.
"""

import re
from dataclasses import dataclass
from enum import Enum

import numpy as np

from amrsim import smatch as _smatch
from amrsim import wlkernel
from amrsim.graph import AmrGraph, Triple, TripleSet, extract_triples, node_degrees
from amrsim.wordvec import WordVectorTable, label_similarity


class Aspect(Enum):
    SMATCH = "Smatch"
    WLK = "WLK"
    WWLK = "WWLK"
    FRAMES = "Frames"
    UNLABELED = "Unlabeled"
    NAMED_ENTITY = "NamedEntity"
    NEGATION = "Negation"
    CONCEPTS = "Concepts"
    COREFERENCE = "Coreference"
    SRL = "SRL"
    MAX_INDEGREE_SIM = "maxIndegreeSim"
    MAX_OUTDEGREE_SIM = "maxOutDegreeSim"
    MAX_DEGREE_SIM = "maxDegreeSim"
    ROOT_SIM = "rootSim"
    QUANT_SIM = "quantSim"


ASPECT_ORDER = tuple(Aspect)
ASPECT_NAMES = tuple(a.value for a in ASPECT_ORDER)
NUM_ASPECTS = len(ASPECT_ORDER)

PROJECTED_ASPECTS = (
    Aspect.FRAMES,
    Aspect.UNLABELED,
    Aspect.NAMED_ENTITY,
    Aspect.NEGATION,
    Aspect.CONCEPTS,
    Aspect.COREFERENCE,
    Aspect.SRL,
)

_FRAME_RE = re.compile(r"^\S+-\d{2,}$")
_ARG_RE = re.compile(r"^ARG\d+(-of)?$")
UNLABELED_WILDCARD = "rel"


def aspect_projection(aspect: Aspect, triples: TripleSet) -> TripleSet:
    """Filter a triple set down to one semantic aspect."""
    instances = {t.source: t for t in triples.instances}
    relations = list(triples.relations)
    attributes = list(triples.attributes)

    if aspect == Aspect.CONCEPTS:
        return TripleSet(instances.values())

    if aspect == Aspect.FRAMES:
        return TripleSet(t for t in instances.values() if _FRAME_RE.match(t.target))

    if aspect == Aspect.NEGATION:
        out = []
        for t in attributes:
            if t.label == "polarity":
                out.append(t)
                if t.source in instances:
                    out.append(instances[t.source])
        return TripleSet(out)

    if aspect == Aspect.SRL:
        out = []
        for t in relations:
            if _ARG_RE.match(t.label):
                out.append(t)
                out.append(instances[t.source])
                out.append(instances[t.target])
        return TripleSet(out)

    if aspect == Aspect.UNLABELED:
        return TripleSet(
            Triple("relation", t.source, UNLABELED_WILDCARD, t.target)
            for t in relations
        )

    if aspect == Aspect.COREFERENCE:
        indeg = {}
        for t in relations:
            indeg[t.target] = indeg.get(t.target, 0) + 1
        shared = {v for v, n in indeg.items() if n >= 2}
        out = [t for t in relations if t.target in shared]
        out.extend(instances[v] for v in shared)
        return TripleSet(out)

    if aspect == Aspect.NAMED_ENTITY:
        out = []
        outgoing = {}
        for t in relations + attributes:
            outgoing.setdefault(t.source, []).append(t)
        roots = set()
        for t in relations:
            if t.label == "name":
                out.append(t)
                out.append(instances[t.source])
                roots.add(t.target)
        for t in attributes:
            if t.label == "wiki":
                out.append(t)
                if t.source in instances:
                    out.append(instances[t.source])
        seen = set()
        frontier = sorted(roots)
        while frontier:  # everything below a name node belongs to the entity
            v = frontier.pop()
            if v in seen:
                continue
            seen.add(v)
            if v in instances:
                out.append(instances[v])
            for t in outgoing.get(v, ()):
                out.append(t)
                if t.kind == "relation" and t.target not in seen:
                    frontier.append(t.target)
        return TripleSet(out)

    raise ValueError("unsupported aspect for projection: %s" % aspect)


def aspect_score(
    aspect: Aspect,
    a: AmrGraph,
    a2: AmrGraph,
    restarts: int = 4,
    seed: int = 0,
    alignment: dict = None,
) -> float:
    """Projected Smatch F-score; pass ``alignment`` to reuse a whole-graph
    alignment instead of searching again."""
    ta = aspect_projection(aspect, extract_triples(a))
    tb = aspect_projection(aspect, extract_triples(a2))
    if not ta and not tb:
        return 1.0
    if not ta or not tb:
        return 0.0
    if alignment is None:
        _, alignment = _smatch.align(a, a2, restarts=restarts, seed=seed)
    matched = _smatch.matched_triples(ta, tb, alignment)
    return _smatch.f_score(matched, len(ta), len(tb))


def quant_sim(a: AmrGraph, a2: AmrGraph) -> float:
    """Harmonic-mean overlap of the two quantifier-target multisets."""

    def quants(g):
        out = []
        for s, r, t in g.edges:
            if r == "quant":
                out.append(g.nodes.get(t, t))  # concept for variable targets
        return out

    qa, qb = quants(a), quants(a2)
    if not qa and not qb:
        return 1.0
    if not qa or not qb:
        return 0.0
    ca, cb = {}, {}
    for x in qa:
        ca[x] = ca.get(x, 0) + 1
    for x in qb:
        cb[x] = cb.get(x, 0) + 1
    matched = sum(min(n, cb.get(x, 0)) for x, n in ca.items())
    return 2.0 * matched / (len(qa) + len(qb))


def _focus_variable(g: AmrGraph, which: str) -> str:
    degrees = node_degrees(g)
    def key(v):
        i, o = degrees[v]
        score = {"in": i, "out": o, "total": i + o}[which]
        # maximal degree first; ties broken by smallest concept label
        return (-score, g.nodes[v], v)
    return min(g.nodes, key=key)


def degree_focus_sim(
    variant: str,
    a: AmrGraph,
    a2: AmrGraph,
    vectors: WordVectorTable = None,
) -> float:
    """Label similarity of the best-connected node of each graph.

    ``variant`` is one of "in", "out", "total".
    """
    if variant not in ("in", "out", "total"):
        raise ValueError("variant must be 'in', 'out' or 'total'")
    ca = a.nodes[_focus_variable(a, variant)]
    cb = a2.nodes[_focus_variable(a2, variant)]
    return label_similarity(vectors, ca, cb)


def root_sim(a: AmrGraph, a2: AmrGraph, vectors: WordVectorTable = None) -> float:
    """Label similarity of the two root concepts."""
    return label_similarity(vectors, a.nodes[a.root], a2.nodes[a2.root])


@dataclass
class MetricConfig:
    restarts: int = 4
    seed: int = 0
    wl_iterations: int = wlkernel.DEFAULT_ITERATIONS
    vectors: WordVectorTable = None


def metric_vector(a: AmrGraph, a2: AmrGraph, config: MetricConfig = None) -> np.ndarray:
    """All 15 metric scores in canonical aspect order, each in [0, 1].

    The whole-graph Smatch alignment is computed once and shared by the
    seven projected aspects.  Degree and root similarities are clamped at 0
    from below so the vector stays in the unit hypercube.
    """
    cfg = config or MetricConfig()
    score, alignment = _smatch.smatch(a, a2, restarts=cfg.restarts, seed=cfg.seed)
    values = {
        Aspect.SMATCH: score,
        Aspect.WLK: wlkernel.wlk(a, a2, cfg.wl_iterations),
        Aspect.WWLK: wlkernel.wwlk(a, a2, cfg.wl_iterations, cfg.vectors),
        Aspect.QUANT_SIM: quant_sim(a, a2),
        Aspect.MAX_INDEGREE_SIM: max(0.0, degree_focus_sim("in", a, a2, cfg.vectors)),
        Aspect.MAX_OUTDEGREE_SIM: max(0.0, degree_focus_sim("out", a, a2, cfg.vectors)),
        Aspect.MAX_DEGREE_SIM: max(0.0, degree_focus_sim("total", a, a2, cfg.vectors)),
        Aspect.ROOT_SIM: max(0.0, root_sim(a, a2, cfg.vectors)),
    }
    for aspect in PROJECTED_ASPECTS:
        values[aspect] = aspect_score(aspect, a, a2, alignment=alignment)
    return np.array([values[aspect] for aspect in ASPECT_ORDER], dtype=np.float64)
