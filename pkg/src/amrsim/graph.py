"""Rooted, directed, labeled AMR graphs and their PENMAN surface form.

The parser covers the PENMAN subset found in AMR corpus releases: variables
with concepts, roles, inverse roles (``:ARG0-of``), string/numeric/``-``
constants, quoted literals, and re-entrant variable references.  Alignment
markers (``~e.N``) are stripped.  Inverse roles are normalized to forward
direction at parse time.  Cycles are tolerated with a warning since parser
output in the wild occasionally violates acyclicity.

Constants keep their surface form (quotes included), so serialization is
byte-faithful and triple comparison is a plain string comparison.

Graphs are immutable in spirit: no function here mutates a graph after
construction, so everything is safe to call concurrently.
"""

import re
import warnings
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Optional


class PenmanError(ValueError):
    """Raised for malformed PENMAN input or invalid graph structure."""


# variables look like "c", "c2", "ii" -- short lowercase id, optional digits
_VAR_RE = re.compile(r"^[a-z][a-z]?[0-9]*$")
_ALIGN_RE = re.compile(r"~[^\s()]*$")
_BARE_SAFE_RE = re.compile(r"^[A-Za-z0-9.+][A-Za-z0-9.+_-]*$|^[-+]$")


class Triple(NamedTuple):
    kind: str    # "instance" | "attribute" | "relation"
    source: str
    label: str
    target: str


class TripleSet:
    """Set of triples with a deterministic canonical ordering."""

    def __init__(self, triples):
        self.triples = frozenset(triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(sorted(self.triples))

    def __len__(self) -> int:
        return len(self.triples)

    def __contains__(self, t) -> bool:
        return t in self.triples

    def __eq__(self, other) -> bool:
        return isinstance(other, TripleSet) and self.triples == other.triples

    def __hash__(self) -> int:
        return hash(self.triples)

    def __repr__(self) -> str:
        return "TripleSet(%s)" % ", ".join(repr(t) for t in self)

    @property
    def instances(self):
        return frozenset(t for t in self.triples if t.kind == "instance")

    @property
    def attributes(self):
        return frozenset(t for t in self.triples if t.kind == "attribute")

    @property
    def relations(self):
        return frozenset(t for t in self.triples if t.kind == "relation")


@dataclass
class AmrGraph:
    """A rooted directed labeled graph decoded from PENMAN notation.

    Attributes:
        root: variable id of the root node.
        nodes: map variable id -> concept label.
        edges: list of (source var, role, target) where the target is a
            variable id (relation edge) or a constant surface form
            (attribute edge).  Roles carry no leading ":".
        metadata: ``# ::key value`` comment lines of the source block
            (``snt`` carries the sentence and survives the pipeline).
    """

    root: str
    nodes: dict = field(default_factory=dict)
    edges: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def is_variable(self, token: str) -> bool:
        return token in self.nodes

    def relation_edges(self):
        return [(s, r, t) for s, r, t in self.edges if t in self.nodes]

    def attribute_edges(self):
        return [(s, r, t) for s, r, t in self.edges if t not in self.nodes]

    def validate(self) -> None:
        """Check structural invariants, raising PenmanError on violation."""
        if not self.nodes:
            raise PenmanError("graph has no nodes")
        if self.root not in self.nodes:
            raise PenmanError("root %r is not a declared variable" % self.root)
        for var, concept in self.nodes.items():
            if not concept:
                raise PenmanError("variable %r declared without a concept" % var)
        for s, r, t in self.edges:
            if s not in self.nodes:
                raise PenmanError("edge source %r is not a declared variable" % s)
        # connected from the root following edges in either direction
        seen = {self.root}
        frontier = [self.root]
        neighbours = {}
        for s, _, t in self.edges:
            if t in self.nodes:
                neighbours.setdefault(s, []).append(t)
                neighbours.setdefault(t, []).append(s)
        while frontier:
            v = frontier.pop()
            for u in neighbours.get(v, ()):
                if u not in seen:
                    seen.add(u)
                    frontier.append(u)
        missing = set(self.nodes) - seen
        if missing:
            raise PenmanError("nodes unreachable from root: %s" % sorted(missing))

    def __str__(self) -> str:
        return serialize_penman(self)


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()/":
            tokens.append(ch)
            i += 1
        elif ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                j += 2 if text[j] == "\\" else 1
            if j >= n:
                raise PenmanError("unterminated string literal")
            j += 1
            end = j
            if j < n and text[j] == "~":  # alignment marker after closing quote
                while j < n and not text[j].isspace() and text[j] not in "()":
                    j += 1
            tokens.append(text[i:end])
            i = j
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "()/":
                j += 1
            tokens.append(_ALIGN_RE.sub("", text[i:j]))
            i = j
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0
        self.nodes = {}
        self.edges = []          # raw, pre-normalization
        self.pending_refs = []   # (source, role, token) resolved after pass

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise PenmanError("unbalanced parentheses: unexpected end of input")
        self.pos += 1
        return tok

    def parse_node(self) -> str:
        tok = self.next()
        if tok != "(":
            raise PenmanError("expected '(' but found %r" % tok)
        var = self.next()
        if var in "()/" or var.startswith(":"):
            raise PenmanError("expected a variable after '(' but found %r" % var)
        if var in self.nodes:
            raise PenmanError("duplicate variable declaration: %r" % var)
        if self.peek() != "/":
            raise PenmanError("variable %r declared without a concept" % var)
        self.next()
        concept = self.next()
        if concept in "()/":
            raise PenmanError("missing concept for variable %r" % var)
        self.nodes[var] = concept
        while True:
            tok = self.peek()
            if tok is None:
                raise PenmanError("unbalanced parentheses: unexpected end of input")
            if tok == ")":
                self.next()
                return var
            if not tok.startswith(":") or len(tok) < 2:
                raise PenmanError("expected a role or ')' but found %r" % tok)
            role = self.next()[1:]
            target = self.peek()
            if target == "(":
                child = self.parse_node()
                self.edges.append((var, role, child, True))
            else:
                value = self.next()
                if value in ")(/" or value.startswith(":"):
                    raise PenmanError("missing value for role :%s" % role)
                self.pending_refs.append((var, role, value))

    def resolve(self):
        for src, role, value in self.pending_refs:
            if value in self.nodes:
                self.edges.append((src, role, value, True))
            elif value.startswith('"') or not _VAR_RE.match(value):
                self.edges.append((src, role, value, False))
            else:
                raise PenmanError("undeclared variable reference: %r" % value)


def parse_penman(text: str, metadata: Optional[dict] = None) -> AmrGraph:
    """Parse a single PENMAN s-expression into an AmrGraph.

    Inverse roles are normalized to forward direction.  Re-entrant
    references are allowed; a directed cycle triggers a warning rather
    than an error.
    """
    if not text or not text.strip():
        raise PenmanError("empty input")
    tokens = _tokenize(text)
    parser = _Parser(tokens)
    root = parser.parse_node()
    if parser.pos != len(tokens):
        raise PenmanError(
            "unbalanced parentheses: trailing input %r" % tokens[parser.pos]
        )
    parser.resolve()

    edges = []
    for src, role, target, is_var in parser.edges:
        if role.endswith("-of") and len(role) > 3 and is_var:
            edges.append((target, role[:-3], src))
        else:
            edges.append((src, role, target))

    g = AmrGraph(root=root, nodes=parser.nodes, edges=edges,
                 metadata=dict(metadata or {}))
    g.validate()
    if _has_cycle(g):
        warnings.warn("PENMAN graph for root %r contains a directed cycle" % root)
    return g


def _has_cycle(g: AmrGraph) -> bool:
    out = {}
    for s, _, t in g.edges:
        if t in g.nodes:
            out.setdefault(s, []).append(t)
    state = {}  # 0 in-progress, 1 done

    def visit(v):
        state[v] = 0
        for u in out.get(v, ()):
            if state.get(u) == 0:
                return True
            if u not in state and visit(u):
                return True
        state[v] = 1
        return False

    return any(visit(v) for v in g.nodes if v not in state)


def serialize_penman(g: AmrGraph, indent: bool = False) -> str:
    """Serialize a graph to canonical PENMAN text.

    A spanning tree is built depth-first from the root with lexicographic
    (role, target) ordering, preferring forward edges; nodes reachable
    only against edge direction attach with "-of" roles.  Non-tree edges
    render at their source as bare re-entrant references.  Output is
    deterministic.
    """
    g.validate()
    outgoing = {}
    incoming = {}
    for idx, (s, r, t) in enumerate(g.edges):
        outgoing.setdefault(s, []).append(idx)
        if t in g.nodes:
            incoming.setdefault(t, []).append(idx)

    covered = set()
    tree = set()
    children = {v: [] for v in g.nodes}  # anchor -> [(render_role, child, idx)]

    def forward_dfs(v):
        covered.add(v)
        out = sorted(outgoing.get(v, ()), key=lambda i: (g.edges[i][1], g.edges[i][2]))
        for idx in out:
            _, role, target = g.edges[idx]
            if target in g.nodes and target not in covered:
                tree.add(idx)
                children[v].append((role, target, idx))
                forward_dfs(target)

    forward_dfs(g.root)
    while len(covered) < len(g.nodes):
        candidates = []
        for t in sorted(covered):
            for idx in incoming.get(t, ()):
                s = g.edges[idx][0]
                if s not in covered:
                    candidates.append((t, g.edges[idx][1] + "-of", s, idx))
        anchor, role, child, idx = min(candidates, key=lambda c: (c[0], c[1], c[2]))
        tree.add(idx)
        children[anchor].append((role, child, idx))
        forward_dfs(child)

    def emit_constant(value: str) -> str:
        if value.startswith('"'):
            return value
        if _BARE_SAFE_RE.match(value) is None:
            return '"%s"' % value
        if value in g.nodes or _VAR_RE.match(value):
            return '"%s"' % value  # would re-parse as a variable reference
        return value

    parts = []

    def render(var: str, depth: int):
        parts.append("(%s / %s" % (var, g.nodes[var]))
        items = []  # (role, sort_key, payload, expand_child)
        for role, child, idx in children[var]:
            items.append((role, child, child, idx))
        for idx in outgoing.get(var, ()):
            if idx in tree:
                continue
            _, role, target = g.edges[idx]
            payload = target if target in g.nodes else emit_constant(target)
            items.append((role, payload, payload, None))
        items.sort(key=lambda c: (c[0], c[1]))
        for role, _, payload, idx in items:
            pad = ("\n" + "    " * (depth + 1)) if indent else " "
            parts.append("%s:%s " % (pad, role))
            if idx is not None:
                render(payload, depth + 1)
            else:
                parts.append(payload)
        parts.append(")")

    render(g.root, 0)
    return "".join(parts)


def extract_triples(g: AmrGraph) -> TripleSet:
    """The triple view of a graph: one instance triple per variable, one
    triple per edge, plus a ``top`` attribute marking the root concept."""
    triples = [Triple("instance", v, "instance", c) for v, c in g.nodes.items()]
    triples.append(Triple("attribute", g.root, "top", g.nodes[g.root]))
    for s, r, t in g.edges:
        kind = "relation" if t in g.nodes else "attribute"
        triples.append(Triple(kind, s, r, t))
    return TripleSet(triples)


def node_degrees(g: AmrGraph) -> dict:
    """Per-variable (indegree, outdegree) over forward-normalized edges.

    Attribute edges count toward the source's outdegree; constants are not
    degree candidates themselves.
    """
    indeg = Counter()
    outdeg = Counter()
    for s, r, t in g.edges:
        outdeg[s] += 1
        if t in g.nodes:
            indeg[t] += 1
    return {v: (indeg[v], outdeg[v]) for v in g.nodes}


def iter_penman_blocks(text: str):
    """Yield (metadata dict, penman text) per blank-line-separated block."""
    for block in re.split(r"\n\s*\n", text):
        if not block.strip():
            continue
        metadata = {}
        body_lines = []
        for line in block.splitlines():
            if line.startswith("#"):
                m = re.match(r"#\s*::(\S+)\s*(.*)", line)
                if m:
                    metadata[m.group(1)] = m.group(2).strip()
            else:
                body_lines.append(line)
        body = "\n".join(body_lines).strip()
        if body:
            yield metadata, body


def read_penman_file(path) -> list:
    """Read a PENMAN corpus file into a list of AmrGraphs (metadata attached)."""
    with open(path, encoding="utf-8") as f:
        text = f.read()
    graphs = []
    for metadata, body in iter_penman_blocks(text):
        graphs.append(parse_penman(body, metadata=metadata))
    return graphs


def write_penman_file(path, graphs, indent: bool = True) -> None:
    """Write graphs back to disk, preserving ``# ::key`` metadata lines."""
    blocks = []
    for g in graphs:
        lines = ["# ::%s %s" % (k, v) for k, v in g.metadata.items()]
        lines.append(serialize_penman(g, indent=indent))
        blocks.append("\n".join(lines))
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n\n".join(blocks) + "\n")
