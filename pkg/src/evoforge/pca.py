"""Principal component analysis over 256-d speaker embeddings.

The search loop runs in a k-dimensional coefficient space (k = 10 in the
reference configuration); this module owns the affine bidirectional map
between that space and the full embedding space.

Embeddings and coefficient vectors are plain float64 ndarrays validated at
the boundaries (:func:`as_embedding`, :func:`as_coefficients`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DimensionError, FormatError, ValidationError

EMBEDDING_DIM = 256

ORTHONORMALITY_TOL = 1e-9


def as_embedding(values: Sequence[float] | np.ndarray) -> np.ndarray:
    """Validate and return a (256,) float64 embedding vector."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] != EMBEDDING_DIM:
        raise DimensionError(
            f"embedding must have length {EMBEDDING_DIM}, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValidationError("embedding contains non-finite values")
    return arr


def as_coefficients(values: Sequence[float] | np.ndarray, k: int) -> np.ndarray:
    """Validate and return a (k,) float64 coefficient vector."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] != k:
        raise DimensionError(f"coefficient vector must have length {k}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("coefficient vector contains non-finite values")
    return arr


@dataclass(frozen=True)
class PcaModel:
    """Fitted PCA: ``mean`` centroid, k orthonormal axes, per-axis score stddevs.

    ``component_stddevs`` are the sample standard deviations (ddof=1) of the
    training scores along each axis; the evolution engine uses them as the
    natural per-axis scale for mutation and random sampling.
    """

    mean: np.ndarray
    components: np.ndarray
    component_stddevs: np.ndarray
    k: int
    training_count: int

    def __post_init__(self):
        mean = as_embedding(self.mean)
        comps = np.asarray(self.components, dtype=np.float64)
        stds = np.asarray(self.component_stddevs, dtype=np.float64)
        if comps.shape != (self.k, EMBEDDING_DIM):
            raise DimensionError(
                f"components must have shape ({self.k}, {EMBEDDING_DIM}), got {comps.shape}"
            )
        if stds.shape != (self.k,):
            raise DimensionError(f"component_stddevs must have shape ({self.k},)")
        if self.k < 1 or self.k > min(self.training_count, EMBEDDING_DIM):
            raise ValidationError(
                f"k={self.k} must be in [1, min(training_count={self.training_count}, {EMBEDDING_DIM})]"
            )
        gram = comps @ comps.T
        if np.max(np.abs(gram - np.eye(self.k))) > ORTHONORMALITY_TOL:
            raise ValidationError("principal axes are not orthonormal within 1e-9")
        if np.any(stds < 0) or np.any(np.diff(stds) > 0):
            raise ValidationError("component_stddevs must be nonnegative and non-increasing")
        for field, value in (("mean", mean), ("components", comps), ("component_stddevs", stds)):
            value.setflags(write=False)
            object.__setattr__(self, field, value)


def _fix_signs(components: np.ndarray) -> np.ndarray:
    """Deterministic sign convention: each axis's largest-magnitude element is positive."""
    out = components.copy()
    for i in range(out.shape[0]):
        j = int(np.argmax(np.abs(out[i])))
        if out[i, j] < 0:
            out[i] = -out[i]
    return out


def fit(training: Sequence[Sequence[float]] | np.ndarray, k: int) -> PcaModel:
    """Fit the top-k principal axes of the centered training set.

    Axes are ordered by decreasing variance and sign-fixed so the result is
    deterministic for a fixed input (including under row permutation).
    """
    if k < 1:
        raise ValidationError(f"k must be positive, got {k}")
    data = np.asarray(training, dtype=np.float64)
    if data.ndim != 2 or data.shape[1] != EMBEDDING_DIM:
        raise DimensionError(
            f"training must be an (n, {EMBEDDING_DIM}) matrix, got shape {data.shape}"
        )
    n = data.shape[0]
    if n < k:
        raise DimensionError(f"need at least k={k} training vectors, got {n}")
    if not np.all(np.isfinite(data)):
        raise ValidationError("training data contains non-finite values")

    mean = data.mean(axis=0)
    centered = data - mean
    _, singulars, vt = np.linalg.svd(centered, full_matrices=False)
    components = _fix_signs(vt[:k])
    # SVD returns singular values non-increasing and nonnegative; values at
    # the level of centering round-off are genuinely zero variance
    noise_floor = (
        np.finfo(np.float64).eps
        * np.sqrt(n * EMBEDDING_DIM)
        * float(np.max(np.abs(data), initial=0.0))
    )
    singulars = np.where(singulars <= noise_floor, 0.0, singulars)
    stddevs = singulars[:k] / np.sqrt(n - 1) if n > 1 else np.zeros(k)
    return PcaModel(
        mean=mean,
        components=components,
        component_stddevs=stddevs,
        k=k,
        training_count=n,
    )


def project(model: PcaModel, embedding: Sequence[float] | np.ndarray) -> np.ndarray:
    """Scores of ``embedding`` on the principal axes: ``components @ (e - mean)``."""
    e = as_embedding(embedding)
    return model.components @ (e - model.mean)


def inverse(model: PcaModel, coeffs: Sequence[float] | np.ndarray) -> np.ndarray:
    """Reconstruct an embedding: ``mean + components.T @ coeffs``."""
    c = as_coefficients(coeffs, model.k)
    return model.mean + model.components.T @ c


SCHEMA_VERSION = 1


def to_json(model: PcaModel) -> str:
    doc = {
        "version": SCHEMA_VERSION,
        "k": model.k,
        "mean": model.mean.tolist(),
        "components": model.components.tolist(),
        "component_stddevs": model.component_stddevs.tolist(),
        "training_count": model.training_count,
    }
    return json.dumps(doc)


def from_json(text: str) -> PcaModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid PCA model JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("version") != SCHEMA_VERSION:
        raise FormatError(f"unsupported PCA model version: {doc.get('version')!r}")
    try:
        return PcaModel(
            mean=np.asarray(doc["mean"], dtype=np.float64),
            components=np.asarray(doc["components"], dtype=np.float64),
            component_stddevs=np.asarray(doc["component_stddevs"], dtype=np.float64),
            k=int(doc["k"]),
            training_count=int(doc["training_count"]),
        )
    except KeyError as exc:
        raise FormatError(f"PCA model JSON missing field {exc}") from exc


def save(model: PcaModel, path: str | Path) -> None:
    Path(path).write_text(to_json(model))


def load(path: str | Path) -> PcaModel:
    return from_json(Path(path).read_text())
