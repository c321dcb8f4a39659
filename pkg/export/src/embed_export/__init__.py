"""Frozen teacher sentence embeddings, exported as EMB1 binary files."""

from embed_export.encoder import DEFAULT_MODEL, ModelUnavailableError, load_encoder
from embed_export.writer import export_embeddings, write_emb1

__version__ = "0.1.0"
