"""Batch convergence experiments with simulated judges.

``run_trial`` wires the evolution engine to a preference oracle and records
the parent's score trajectory. The two committed experiment protocols
(convergence, restart escape) are used verbatim by the calibration script
and the acceptance suite, so their thresholds stay reproducible.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import binomtest

from . import corpus
from .errors import ValidationError
from .evolution import (
    ORIGIN_RESTART,
    ORIGIN_SEED,
    EvolutionConfig,
    Individual,
    initial_population,
    make_rng,
    select_and_advance,
)
from .judges import DeceptiveTwoClusterJudge, PreferenceJudge, SimulatedJudge, judge
from .pca import PcaModel

# splitmix-style salt decorrelates the default judge stream from the ES stream
_JUDGE_SEED_SALT = 0x9E3779B97F4A7C15

CONVERGENCE_BASE_SEED = 20_250_701
CONVERGENCE_TRIALS = 100
CONVERGENCE_GENERATIONS = 50

ESCAPE_BASE_SEED = 20_250_801
ESCAPE_PAIRS = 200
ESCAPE_GENERATIONS = 50
ESCAPE_GOOD_OFFSET = 2.5  # good-basin center, in units of the 2nd axis stddev
ESCAPE_BAD_FLOOR = 2.5


@dataclass(frozen=True)
class TrialReport:
    seed: int
    judge_seed: int
    generations_run: int
    initial_distance: float
    final_distance: float
    distance_trajectory: tuple[float, ...]
    restart_count: int

    def __post_init__(self):
        if len(self.distance_trajectory) != self.generations_run + 1:
            raise ValidationError("trajectory length must be generations_run + 1")
        if self.restart_count > self.generations_run:
            raise ValidationError("restart_count cannot exceed generations_run")
        object.__setattr__(self, "distance_trajectory", tuple(self.distance_trajectory))

    @property
    def ratio(self) -> float:
        if self.initial_distance == 0:
            return 0.0 if self.final_distance == 0 else float("inf")
        return self.final_distance / self.initial_distance

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["distance_trajectory"] = list(self.distance_trajectory)
        doc["ratio"] = self.ratio
        return doc


def default_judge_seed(config_seed: int) -> int:
    return (config_seed + _JUDGE_SEED_SALT) % 2**64


def run_trial(
    config: EvolutionConfig,
    preference: PreferenceJudge,
    generations: int,
    model: PcaModel | None = None,
    judge_seed: int | None = None,
) -> TrialReport:
    """Automated loop: seed pair, then (judge -> select_and_advance) x generations."""
    if generations < 0:
        raise ValidationError("generations must be nonnegative")
    model = model or corpus.default_model()
    low, high = corpus.seed_coefficients(model)
    pop = initial_population(
        Individual(genes=low, id="g0-p", origin=ORIGIN_SEED),
        Individual(genes=high, id="g0-o0", origin=ORIGIN_SEED),
        config,
    )
    es_rng = make_rng(config.rng_seed)
    judge_seed = default_judge_seed(config.rng_seed) if judge_seed is None else judge_seed
    judge_rng = make_rng(judge_seed)
    trajectory = [preference.score(pop.parent.genes)]
    restarts = 0
    for _ in range(generations):
        verdict = judge(preference, pop.parent, pop.offspring[0], judge_rng)
        pop = select_and_advance(pop, verdict, config, model, es_rng)
        restarts += sum(o.origin == ORIGIN_RESTART for o in pop.offspring)
        trajectory.append(preference.score(pop.parent.genes))
    return TrialReport(
        seed=config.rng_seed,
        judge_seed=judge_seed,
        generations_run=generations,
        initial_distance=trajectory[0],
        final_distance=trajectory[-1],
        distance_trajectory=tuple(trajectory),
        restart_count=restarts,
    )


def run_convergence_experiment(
    n_trials: int = CONVERGENCE_TRIALS,
    generations: int = CONVERGENCE_GENERATIONS,
    base_seed: int = CONVERGENCE_BASE_SEED,
    noise: float = 0.0,
    epsilon: float = 0.2,
    sigma_scale: float = 0.3,
    restart_scale: float = 1.0,
    model: PcaModel | None = None,
) -> list[TrialReport]:
    """Distance-judge trials with per-seed hidden targets drawn like restarts."""
    model = model or corpus.default_model()
    reports = []
    for i in range(n_trials):
        seed = base_seed + i
        judge_seed = default_judge_seed(seed)
        target_rng = make_rng(judge_seed)
        target = target_rng.standard_normal(model.k) * model.component_stddevs
        preference = SimulatedJudge(target=target, noise=noise)
        config = EvolutionConfig(
            epsilon=epsilon,
            sigma_scale=sigma_scale,
            restart_scale=restart_scale,
            rng_seed=seed,
        )
        reports.append(
            run_trial(config, preference, generations, model=model, judge_seed=judge_seed)
        )
    return reports


def summarize(reports: list[TrialReport]) -> dict:
    if not reports:
        return {"count": 0}
    ratios = np.array([r.ratio for r in reports])
    restarts = np.array([r.restart_count for r in reports])
    monotone = [
        all(b <= a + 1e-12 for a, b in zip(r.distance_trajectory, r.distance_trajectory[1:]))
        for r in reports
    ]
    return {
        "count": len(reports),
        "generations": reports[0].generations_run,
        "median_ratio": float(np.median(ratios)),
        "mean_ratio": float(ratios.mean()),
        "p10_ratio": float(np.quantile(ratios, 0.10)),
        "p90_ratio": float(np.quantile(ratios, 0.90)),
        "max_ratio": float(ratios.max()),
        "mean_restarts": float(restarts.mean()),
        "monotone_fraction": float(np.mean(monotone)),
    }


def make_escape_landscape(model: PcaModel | None = None) -> DeceptiveTwoClusterJudge:
    """The committed deceptive landscape: bad basin at the low seed, good basin off-axis."""
    model = model or corpus.default_model()
    low, _ = corpus.seed_coefficients(model)
    good = np.array([0.0, ESCAPE_GOOD_OFFSET * model.component_stddevs[1]])
    return DeceptiveTwoClusterJudge(
        bad_center=low[:2], good_center=good, bad_floor=ESCAPE_BAD_FLOOR
    )


def run_escape_experiment(
    n_pairs: int = ESCAPE_PAIRS,
    generations: int = ESCAPE_GENERATIONS,
    base_seed: int = ESCAPE_BASE_SEED,
    epsilon_on: float = 0.2,
    model: PcaModel | None = None,
) -> dict:
    """Paired-seed comparison of restart-enabled vs restart-free search.

    Each seed runs once with epsilon = ``epsilon_on`` and once with epsilon = 0
    on the deceptive landscape; a run escapes when its final parent scores below
    the bad basin's floor. Returns counts and a one-sided sign-test p-value.
    """
    model = model or corpus.default_model()
    landscape = make_escape_landscape(model)
    n_plus = n_minus = on_escapes = off_escapes = 0
    for i in range(n_pairs):
        seed = base_seed + i
        outcomes = {}
        for eps in (epsilon_on, 0.0):
            config = EvolutionConfig(epsilon=eps, rng_seed=seed)
            report = run_trial(config, landscape, generations, model=model, judge_seed=seed)
            outcomes[eps] = report.final_distance < landscape.bad_floor
        on_escapes += outcomes[epsilon_on]
        off_escapes += outcomes[0.0]
        if outcomes[epsilon_on] and not outcomes[0.0]:
            n_plus += 1
        elif outcomes[0.0] and not outcomes[epsilon_on]:
            n_minus += 1
    if n_plus + n_minus:
        p_value = float(
            binomtest(n_plus, n_plus + n_minus, 0.5, alternative="greater").pvalue
        )
    else:
        p_value = 1.0
    return {
        "pairs": n_pairs,
        "generations": generations,
        "epsilon_on": epsilon_on,
        "escapes_with_restarts": on_escapes,
        "escapes_without_restarts": off_escapes,
        "n_plus": n_plus,
        "n_minus": n_minus,
        "sign_test_p": p_value,
    }
