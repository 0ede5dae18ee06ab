"""Synthetic speaker corpus and the default search-space model built from it.

110 synthetic 256-d speaker embeddings stand in for a real multi-speaker
training set: two groups of 55 ("low" and "high" pitch) separated along the
synthesizer's pitch control direction, plus isotropic spread. The group
separation makes the first principal axis a pitch axis, and the two group
centroids serve as the stereotypical low/high seed voices for new sessions.

Everything here is derived from committed seeds, so the corpus, the fitted
model and the seed voices are bit-reproducible.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import pca
from .synth import control_directions

CORPUS_SEED = 190106
CORPUS_SIZE = 110
GROUP_LOW = "low"
GROUP_HIGH = "high"
PITCH_OFFSET = 2.5  # group centroid shift along the pitch control direction
SPREAD = 0.6  # isotropic per-speaker noise stddev

DEFAULT_COMPONENTS = 10


@lru_cache(maxsize=1)
def build_corpus() -> tuple[np.ndarray, tuple[str, ...]]:
    """Return (embeddings (110, 256), group labels)."""
    rng = np.random.default_rng(CORPUS_SEED)
    half = CORPUS_SIZE // 2
    labels = (GROUP_LOW,) * half + (GROUP_HIGH,) * (CORPUS_SIZE - half)
    pitch_dir = control_directions()[0]
    signs = np.where(np.asarray(labels) == GROUP_LOW, -1.0, 1.0)
    embeddings = signs[:, None] * PITCH_OFFSET * pitch_dir[None, :]
    embeddings = embeddings + SPREAD * rng.standard_normal((CORPUS_SIZE, 256))
    embeddings.setflags(write=False)
    return embeddings, labels


def group_centroids() -> tuple[np.ndarray, np.ndarray]:
    """Centroids of the low-pitch and high-pitch speaker groups."""
    embeddings, labels = build_corpus()
    mask = np.asarray(labels) == GROUP_LOW
    return embeddings[mask].mean(axis=0), embeddings[~mask].mean(axis=0)


@lru_cache(maxsize=1)
def default_model() -> pca.PcaModel:
    """PCA fitted on the synthetic corpus with the reference component count."""
    embeddings, _ = build_corpus()
    return pca.fit(embeddings, DEFAULT_COMPONENTS)


def seed_coefficients(model: pca.PcaModel | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Search-space coordinates of the two seed voices (low, high)."""
    model = model or default_model()
    low, high = group_centroids()
    return pca.project(model, low), pca.project(model, high)
