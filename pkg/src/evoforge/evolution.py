"""(1 + lambda) evolution strategy with epsilon mutation.

The fitness function is external: a judgment names the preferred individual
of the current population and that individual survives unchanged (elitism).
Offspring are produced either by adding per-axis Gaussian noise to the parent
(probability 1 - epsilon) or by sampling a fresh random individual
(probability epsilon), which lets the search escape local optima.

All randomness flows through an explicit numpy Generator owned by the caller,
so identical seeds and judgment sequences reproduce bit-identical gene
trajectories. Genes are never clamped or bounded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import ConfigurationError, DimensionError, JudgmentError, ValidationError
from .pca import PcaModel, as_coefficients

Origin = Literal["seed", "mutation", "random_restart"]

ORIGIN_SEED: Origin = "seed"
ORIGIN_MUTATION: Origin = "mutation"
ORIGIN_RESTART: Origin = "random_restart"

_MAX_SEED = 2**64 - 1


@dataclass(frozen=True, eq=False)
class Individual:
    genes: np.ndarray
    id: str
    origin: Origin

    def __post_init__(self):
        genes = np.asarray(self.genes, dtype=np.float64)
        if genes.ndim != 1:
            raise DimensionError("genes must be a 1-d vector")
        if not np.all(np.isfinite(genes)):
            raise ValidationError("genes contain non-finite values")
        if not self.id:
            raise ValidationError("individual id must be non-empty")
        if self.origin not in (ORIGIN_SEED, ORIGIN_MUTATION, ORIGIN_RESTART):
            raise ValidationError(f"unknown origin {self.origin!r}")
        genes.setflags(write=False)
        object.__setattr__(self, "genes", genes)


@dataclass(frozen=True)
class Population:
    parent: Individual
    offspring: tuple[Individual, ...]
    generation: int

    def __post_init__(self):
        offspring = tuple(self.offspring)
        if not offspring:
            raise ValidationError("population needs at least one offspring")
        if self.generation < 0:
            raise ValidationError("generation must be nonnegative")
        ids = [self.parent.id] + [o.id for o in offspring]
        if len(set(ids)) != len(ids):
            raise ValidationError(f"duplicate individual ids in population: {ids}")
        object.__setattr__(self, "offspring", offspring)

    def members(self) -> tuple[Individual, ...]:
        return (self.parent, *self.offspring)

    def by_id(self, individual_id: str) -> Individual | None:
        for member in self.members():
            if member.id == individual_id:
                return member
        return None

    @property
    def size(self) -> int:
        return 1 + len(self.offspring)


@dataclass(frozen=True)
class EvolutionConfig:
    """Search parameters. ``lam`` is the offspring count per generation."""

    lam: int = 1
    epsilon: float = 0.2
    sigma_scale: float = 0.3
    restart_scale: float = 1.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.lam < 1:
            raise ConfigurationError(f"lambda must be >= 1, got {self.lam}")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ConfigurationError(f"epsilon must be in [0, 1], got {self.epsilon}")
        if not self.sigma_scale > 0:
            raise ConfigurationError(f"sigma_scale must be positive, got {self.sigma_scale}")
        if not self.restart_scale > 0:
            raise ConfigurationError(f"restart_scale must be positive, got {self.restart_scale}")
        if not isinstance(self.rng_seed, int) or not 0 <= self.rng_seed <= _MAX_SEED:
            raise ConfigurationError("rng_seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class Judgment:
    """Preference for one member of the presented population."""

    chosen: str


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def rng_state(rng: np.random.Generator) -> dict:
    return rng.bit_generator.state


def rng_from_state(state: dict) -> np.random.Generator:
    rng = np.random.default_rng(0)
    rng.bit_generator.state = state
    return rng


def initial_population(
    seed_a: Individual, seed_b: Individual, config: EvolutionConfig
) -> Population:
    """Generation-0 population: ``seed_a`` as parent, ``seed_b`` as the sole offspring."""
    if config.lam != 1:
        raise ConfigurationError(
            f"initial pairing from two seeds is defined only for lambda=1, got {config.lam}"
        )
    if seed_a.genes.shape != seed_b.genes.shape:
        raise DimensionError("seed gene lengths differ")
    return Population(parent=seed_a, offspring=(seed_b,), generation=0)


def mutate(
    parent: Individual,
    config: EvolutionConfig,
    model: PcaModel,
    rng: np.random.Generator,
    offspring_id: str = "offspring",
) -> Individual:
    """Produce one offspring from ``parent``.

    Draws u ~ U[0, 1): u >= epsilon perturbs the parent with Gaussian noise of
    per-axis stddev ``sigma_scale * component_stddevs``; otherwise samples a
    fresh individual with per-axis stddev ``restart_scale * component_stddevs``.
    """
    genes = as_coefficients(parent.genes, model.k)
    u = rng.random()
    noise = rng.standard_normal(model.k)
    if u >= config.epsilon:
        child = genes + noise * (config.sigma_scale * model.component_stddevs)
        origin = ORIGIN_MUTATION
    else:
        child = noise * (config.restart_scale * model.component_stddevs)
        origin = ORIGIN_RESTART
    return Individual(genes=child, id=offspring_id, origin=origin)


def select_and_advance(
    pop: Population,
    judgment: Judgment,
    config: EvolutionConfig,
    model: PcaModel,
    rng: np.random.Generator,
) -> Population:
    """Promote the chosen individual to parent and breed ``lam`` fresh offspring.

    The chosen individual carries over verbatim (same genes, same id).
    """
    chosen = pop.by_id(judgment.chosen)
    if chosen is None:
        raise JudgmentError(
            f"judgment names {judgment.chosen!r}, not a member of the current population",
            detail={"population": [m.id for m in pop.members()]},
        )
    next_generation = pop.generation + 1
    offspring = tuple(
        mutate(chosen, config, model, rng, offspring_id=f"g{next_generation}-o{i}")
        for i in range(config.lam)
    )
    return Population(parent=chosen, offspring=offspring, generation=next_generation)
