"""EMB1 file writing.

Layout contract shared with the consumer: magic ``EMB1``, u32 count,
u32 dim (little-endian), ``count * dim`` float32 values row-major, and
a ``<path>.txt`` sidecar with one sentence per line aligned by index.
Writes are atomic (temp file then rename).
"""

import os
import struct

import numpy as np

MAGIC = b"EMB1"


def write_emb1(path, matrix: np.ndarray, sentences) -> None:
    matrix = np.ascontiguousarray(matrix, dtype="<f4")
    count, dim = matrix.shape
    if len(sentences) != count:
        raise ValueError("%d sentences for %d embedding rows" % (len(sentences), count))
    tmp = str(path) + ".tmp"
    with open(tmp, "wb") as f:
        f.write(struct.pack("<4sII", MAGIC, count, dim))
        f.write(matrix.tobytes(order="C"))
    os.replace(tmp, path)
    tmp = str(path) + ".txt.tmp"
    with open(tmp, "w", encoding="utf-8") as f:
        for sentence in sentences:
            f.write(sentence.rstrip("\n") + "\n")
    os.replace(tmp, str(path) + ".txt")


def read_sentences(path) -> list:
    with open(path, encoding="utf-8") as f:
        sentences = [line.rstrip("\n") for line in f]
    while sentences and not sentences[-1].strip():
        sentences.pop()
    if not sentences:
        raise ValueError("no sentences in %s" % path)
    return sentences


def export_embeddings(sentences_path, model_name, out_path, batch_size: int = 32):
    """Encode one sentence per input line and write the EMB1 file.

    Returns (count, dim).  Deterministic for a fixed model revision.
    """
    from embed_export.encoder import load_encoder

    sentences = read_sentences(sentences_path)
    encoder = load_encoder(model_name)
    matrix = encoder.encode(sentences, batch_size=batch_size)
    write_emb1(out_path, matrix, sentences)
    return matrix.shape
