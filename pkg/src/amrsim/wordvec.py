"""Word vectors for node-label similarity.

Loads the standard text format (``token v1 v2 ... vd`` per line).  Concept
labels are lowercased and PropBank sense suffixes (``-01``) are stripped
before lookup.  Out-of-vocabulary pairs fall back to an exact-string-match
indicator, which keeps every metric deterministic without a vector file.
"""

import re

import numpy as np


class VectorFileError(ValueError):
    """Raised for unreadable or inconsistent word-vector files."""


_SENSE_RE = re.compile(r"-\d{2,}$")


def strip_sense(label: str) -> str:
    """``like-01`` -> ``like``; lowercases the result."""
    return _SENSE_RE.sub("", label).lower()


class WordVectorTable:
    """Immutable token -> vector lookup with case-insensitive keys."""

    def __init__(self, entries: dict, dim: int):
        self.dim = dim
        self.entries = entries
        for token, vec in entries.items():
            if vec.shape != (dim,):
                raise VectorFileError(
                    "dimension mismatch for %r: expected %d, got %d"
                    % (token, dim, vec.shape[0])
                )

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, token: str) -> bool:
        return token.lower() in self.entries

    def get(self, token: str):
        return self.entries.get(token.lower())


def load_vectors(path) -> WordVectorTable:
    """Load a plain-text vector file.  Duplicate tokens keep the first row."""
    entries = {}
    dim = None
    try:
        f = open(path, encoding="utf-8")
    except OSError as e:
        raise VectorFileError("cannot read vector file %s: %s" % (path, e))
    with f:
        for lineno, line in enumerate(f, start=1):
            parts = line.rstrip("\n").split(" ")
            if len(parts) < 2 or not line.strip():
                continue
            token = parts[0].lower()
            try:
                vec = np.array([float(x) for x in parts[1:] if x], dtype=np.float64)
            except ValueError as e:
                raise VectorFileError("line %d: %s" % (lineno, e))
            if dim is None:
                dim = vec.shape[0]
            elif vec.shape[0] != dim:
                raise VectorFileError(
                    "line %d: dimension mismatch (expected %d, got %d)"
                    % (lineno, dim, vec.shape[0])
                )
            if token not in entries:
                entries[token] = vec
    if not entries:
        raise VectorFileError("empty vector table: %s" % path)
    return WordVectorTable(entries, dim)


def label_similarity(table, label_a: str, label_b: str) -> float:
    """Cosine similarity of two concept labels, in [-1, 1].

    Identical labels (after sense stripping) score exactly 1.0.  When either
    token is out of vocabulary, or no table is given, the score is the
    exact-match indicator.
    """
    a = strip_sense(label_a)
    b = strip_sense(label_b)
    if a == b:
        return 1.0
    if table is not None:
        va = table.get(a)
        vb = table.get(b)
        if va is not None and vb is not None:
            na = float(np.linalg.norm(va))
            nb = float(np.linalg.norm(vb))
            if na > 0.0 and nb > 0.0:
                return float(np.clip(np.dot(va, vb) / (na * nb), -1.0, 1.0))
    return 0.0
