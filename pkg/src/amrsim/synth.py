"""Synthetic teacher-embedding fixtures with linearly recoverable aspects.

Each pair gets one latent positive-orthant unit vector per aspect; the
pair's metric score for that aspect is the cosine of the two latents (so
scores live in [0, 1]).  Latents plus a residual block are concatenated
and mixed by a random invertible matrix, which scrambles the coordinate
system while keeping every aspect exactly recoverable by a linear map.

The mixer's singular values are spread over [1/cond^0.5, cond^0.5], so
exactly undoing the mix is a non-orthogonal map: recovering the aspects
perfectly necessarily distorts overall cosines, which is what makes a
consistency objective meaningful on this data.  Useful for desk-scale
training demos and for the acceptance suite.
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class SyntheticPairs:
    e1: np.ndarray       # (n, d) teacher embeddings, left sentences
    e2: np.ndarray       # (n, d) teacher embeddings, right sentences
    metrics: np.ndarray  # (n, K) aspect scores in [0, 1]
    mixer: np.ndarray    # (d, d) orthogonal mixing matrix

    def __iter__(self):  # unpacks like (e1, e2, metrics)
        return iter((self.e1, self.e2, self.metrics))


def _positive_unit(rng, n, h):
    z = np.abs(rng.standard_normal((n, h)))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def make_structured_pairs(
    n_pairs: int,
    d: int,
    h: int,
    n_aspects: int = 15,
    seed: int = 0,
    noise: float = 0.01,
    mixer_condition: float = 4.0,
) -> SyntheticPairs:
    """Generate aligned embedding pairs with known aspect scores."""
    if n_aspects * h > d:
        raise ValueError("n_aspects * h must not exceed d")
    if mixer_condition < 1.0:
        raise ValueError("mixer_condition must be >= 1")
    rng = np.random.default_rng(seed)
    residual_dim = d - n_aspects * h
    raw1 = np.empty((n_pairs, d))
    raw2 = np.empty((n_pairs, d))
    metrics = np.empty((n_pairs, n_aspects))
    for k in range(n_aspects):
        z = _positive_unit(rng, n_pairs, h)
        fresh = _positive_unit(rng, n_pairs, h)
        mix = rng.uniform(0.0, 1.0, size=(n_pairs, 1))
        z2 = (1.0 - mix) * z + mix * fresh
        z2 /= np.linalg.norm(z2, axis=1, keepdims=True)
        metrics[:, k] = np.einsum("ij,ij->i", z, z2)
        sl = slice(k * h, (k + 1) * h)
        raw1[:, sl] = z
        raw2[:, sl] = z2
    if residual_dim:
        r = rng.standard_normal((n_pairs, residual_dim))
        mix = rng.uniform(0.0, 1.0, size=(n_pairs, 1))
        r2 = (1.0 - mix) * r + mix * rng.standard_normal((n_pairs, residual_dim))
        raw1[:, n_aspects * h :] = r / np.sqrt(residual_dim)
        raw2[:, n_aspects * h :] = r2 / np.sqrt(residual_dim)
    if noise:
        raw1 += noise * rng.standard_normal(raw1.shape)
        raw2 += noise * rng.standard_normal(raw2.shape)
    left, _ = np.linalg.qr(rng.standard_normal((d, d)))
    right, _ = np.linalg.qr(rng.standard_normal((d, d)))
    spread = np.sqrt(mixer_condition)
    singulars = np.geomspace(1.0 / spread, spread, d)
    mixer = left @ np.diag(rng.permutation(singulars)) @ right.T
    metrics = np.clip(metrics, 0.0, 1.0)
    return SyntheticPairs(raw1 @ mixer.T, raw2 @ mixer.T, metrics, mixer)
