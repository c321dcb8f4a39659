"""EMB1 binary embedding files.

Layout: magic ``EMB1``, u32 count, u32 dim (little-endian), then
``count * dim`` 32-bit little-endian floats, row-major.  A sidecar text
file at ``<path>.txt`` holds one sentence per line, aligned by row index.
"""

import os
import struct

import numpy as np

MAGIC = b"EMB1"
_HEADER = struct.Struct("<4sII")


class EmbeddingFileError(ValueError):
    """Raised for malformed EMB1 files or sidecar mismatches."""


def sidecar_path(path) -> str:
    return str(path) + ".txt"


def write_embeddings(path, matrix, sentences=None) -> None:
    """Write an EMB1 file (and sidecar, if sentences are given) atomically."""
    matrix = np.ascontiguousarray(matrix, dtype="<f4")
    if matrix.ndim != 2:
        raise EmbeddingFileError("embedding matrix must be 2-dimensional")
    count, dim = matrix.shape
    if sentences is not None and len(sentences) != count:
        raise EmbeddingFileError(
            "sidecar has %d sentences for %d rows" % (len(sentences), count)
        )
    tmp = str(path) + ".tmp"
    with open(tmp, "wb") as f:
        f.write(_HEADER.pack(MAGIC, count, dim))
        f.write(matrix.tobytes(order="C"))
    os.replace(tmp, path)
    if sentences is not None:
        tmp = sidecar_path(path) + ".tmp"
        with open(tmp, "w", encoding="utf-8") as f:
            for s in sentences:
                f.write(s.rstrip("\n") + "\n")
        os.replace(tmp, sidecar_path(path))


def read_embeddings(path, with_sentences: bool = False):
    """Read an EMB1 file; returns the float32 matrix, or (matrix, sentences)."""
    with open(path, "rb") as f:
        header = f.read(_HEADER.size)
        if len(header) < _HEADER.size:
            raise EmbeddingFileError("truncated header in %s" % path)
        magic, count, dim = _HEADER.unpack(header)
        if magic != MAGIC:
            raise EmbeddingFileError("bad magic %r in %s" % (magic, path))
        body = f.read()
    expected = count * dim * 4
    if len(body) != expected:
        raise EmbeddingFileError(
            "body of %s has %d bytes, expected %d" % (path, len(body), expected)
        )
    matrix = np.frombuffer(body, dtype="<f4").reshape(count, dim)
    if not with_sentences:
        return matrix
    sidecar = sidecar_path(path)
    if not os.path.exists(sidecar):
        return matrix, None
    with open(sidecar, encoding="utf-8") as f:
        sentences = [line.rstrip("\n") for line in f]
    if len(sentences) != count:
        raise EmbeddingFileError(
            "sidecar %s has %d lines for %d rows" % (sidecar, len(sentences), count)
        )
    return matrix, sentences


def embedding_lookup(matrix, sentences):
    """Map sentence -> embedding row (first occurrence wins)."""
    table = {}
    for i, s in enumerate(sentences):
        table.setdefault(s, matrix[i])
    return table
