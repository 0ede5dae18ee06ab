"""Preference oracles that stand in for the human in batch experiments.

A judge scores genotypes (lower is better) and prefers the lower-scoring of
two individuals, optionally flipping its choice with a configured noise
probability. Exact ties prefer the first individual presented.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Protocol, Sequence

import numpy as np

from .errors import DimensionError, ValidationError
from .evolution import Individual, Judgment


class PreferenceJudge(Protocol):
    noise: float

    def score(self, genes: np.ndarray) -> float: ...


@dataclass(frozen=True)
class SimulatedJudge:
    """Prefers the individual nearer a hidden target voice."""

    target: np.ndarray
    noise: float = 0.0
    metric: Literal["euclidean"] = "euclidean"

    def __post_init__(self):
        target = np.asarray(self.target, dtype=np.float64)
        if target.ndim != 1 or not np.all(np.isfinite(target)):
            raise ValidationError("target must be a finite 1-d vector")
        if not 0.0 <= self.noise <= 0.5:
            raise ValidationError(f"noise must be in [0, 0.5], got {self.noise}")
        if self.metric != "euclidean":
            raise ValidationError(f"unsupported metric {self.metric!r}")
        target.setflags(write=False)
        object.__setattr__(self, "target", target)

    def score(self, genes: np.ndarray) -> float:
        if genes.shape != self.target.shape:
            raise DimensionError(
                f"genes length {genes.shape} does not match target {self.target.shape}"
            )
        return float(np.linalg.norm(genes - self.target))


@dataclass(frozen=True)
class DeceptiveTwoClusterJudge:
    """Two-basin landscape over the first two coefficients.

    A poor basin around ``bad_center`` sits at every seed's doorstep but its
    value is floored at ``bad_floor``; the good basin around ``good_center``
    reaches lower values yet lies behind a barrier wider than any plausible
    mutation step, so only random restarts can cross. Scores ignore all axes
    beyond the first two.
    """

    bad_center: np.ndarray
    good_center: np.ndarray
    bad_floor: float
    noise: float = 0.0

    def __post_init__(self):
        for name in ("bad_center", "good_center"):
            v = np.asarray(getattr(self, name), dtype=np.float64)
            if v.shape != (2,) or not np.all(np.isfinite(v)):
                raise ValidationError(f"{name} must be a finite 2-vector")
            v.setflags(write=False)
            object.__setattr__(self, name, v)
        if not self.bad_floor > 0:
            raise ValidationError("bad_floor must be positive")
        if not 0.0 <= self.noise <= 0.5:
            raise ValidationError(f"noise must be in [0, 0.5], got {self.noise}")

    def score(self, genes: np.ndarray) -> float:
        plane = np.asarray(genes, dtype=np.float64)[:2]
        trapped = float(np.linalg.norm(plane - self.bad_center)) + self.bad_floor
        escaped = float(np.linalg.norm(plane - self.good_center))
        return min(trapped, escaped)

    def escaped(self, genes: Sequence[float] | np.ndarray) -> bool:
        return self.score(np.asarray(genes, dtype=np.float64)) < self.bad_floor


def judge(
    j: PreferenceJudge, a: Individual, b: Individual, rng: np.random.Generator
) -> Judgment:
    """Pick the better-scoring individual; with probability ``noise`` pick the other.

    Always consumes exactly one uniform draw, so trial streams stay aligned
    across noise settings.
    """
    preferred = a if j.score(a.genes) <= j.score(b.genes) else b
    if rng.random() < j.noise:
        preferred = b if preferred is a else a
    return Judgment(chosen=preferred.id)
