"""Sentence encoders behind a single callable interface.

The default teacher is a pre-trained sentence-transformers model with
384-dimensional output.  Environments without model access can use the
deterministic ``hash:<dim>`` encoder, which derives a unit vector per
sentence from a cryptographic digest; it carries no semantics but
produces byte-stable files for pipeline and format testing.
"""

import hashlib

import numpy as np

DEFAULT_MODEL = "sentence-transformers/all-MiniLM-L12-v2"


class ModelUnavailableError(RuntimeError):
    """The requested encoder model cannot be loaded in this environment."""


class HashEncoder:
    """Deterministic stand-in encoder: digest-seeded unit vectors."""

    def __init__(self, dim: int = 384):
        if dim <= 0:
            raise ValueError("dimension must be positive")
        self.dim = dim

    def encode(self, sentences, batch_size: int = 32) -> np.ndarray:
        rows = np.empty((len(sentences), self.dim), dtype=np.float32)
        for i, sentence in enumerate(sentences):
            digest = hashlib.blake2b(sentence.encode("utf-8"), digest_size=8).digest()
            rng = np.random.default_rng(int.from_bytes(digest, "little"))
            v = rng.standard_normal(self.dim)
            rows[i] = (v / np.linalg.norm(v)).astype(np.float32)
        return rows


class TransformerEncoder:
    """Wrapper around a sentence-transformers model."""

    def __init__(self, name: str):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as e:
            raise ModelUnavailableError(
                "sentence-transformers is not installed (%s)" % e
            )
        try:
            self.model = SentenceTransformer(name)
        except Exception as e:
            raise ModelUnavailableError("cannot load model %r: %s" % (name, e))
        self.dim = self.model.get_sentence_embedding_dimension()

    def encode(self, sentences, batch_size: int = 32) -> np.ndarray:
        out = self.model.encode(
            list(sentences),
            batch_size=batch_size,
            convert_to_numpy=True,
            show_progress_bar=False,
        )
        return np.asarray(out, dtype=np.float32)


def load_encoder(name: str = DEFAULT_MODEL):
    """``hash:<dim>`` builds the offline encoder; anything else is treated
    as a sentence-transformers model name."""
    if name.startswith("hash:"):
        return HashEncoder(int(name.split(":", 1)[1]))
    return TransformerEncoder(name)
