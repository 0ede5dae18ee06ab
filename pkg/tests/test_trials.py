from __future__ import annotations

import numpy as np
import pytest

from evoforge.errors import ValidationError
from evoforge.evolution import EvolutionConfig
from evoforge.judges import SimulatedJudge
from evoforge.trials import (
    TrialReport,
    make_escape_landscape,
    run_convergence_experiment,
    run_escape_experiment,
    run_trial,
    summarize,
)


@pytest.fixture(scope="module")
def quick_judge(model):
    return SimulatedJudge(target=np.zeros(model.k))


class TestRunTrial:
    def test_zero_generations(self, model, quick_judge):
        report = run_trial(EvolutionConfig(rng_seed=1), quick_judge, 0, model=model)
        assert report.generations_run == 0
        assert len(report.distance_trajectory) == 1
        assert report.final_distance == report.initial_distance
        assert report.restart_count == 0

    def test_deterministic(self, model, quick_judge):
        a = run_trial(EvolutionConfig(rng_seed=5), quick_judge, 20, model=model, judge_seed=9)
        b = run_trial(EvolutionConfig(rng_seed=5), quick_judge, 20, model=model, judge_seed=9)
        assert a == b

    def test_noiseless_monotone(self, model):
        for seed in range(10):
            rng = np.random.default_rng(seed)
            target = rng.standard_normal(model.k) * model.component_stddevs
            judge_ = SimulatedJudge(target=target)
            report = run_trial(
                EvolutionConfig(rng_seed=seed), judge_, 40, model=model, judge_seed=seed
            )
            trajectory = report.distance_trajectory
            assert all(b <= a for a, b in zip(trajectory, trajectory[1:]))

    def test_restart_count_bounded(self, model, quick_judge):
        report = run_trial(
            EvolutionConfig(rng_seed=8, epsilon=0.5), quick_judge, 30, model=model
        )
        assert 0 <= report.restart_count <= 30

    def test_trajectory_invariant_enforced(self):
        with pytest.raises(ValidationError):
            TrialReport(
                seed=0,
                judge_seed=0,
                generations_run=5,
                initial_distance=1.0,
                final_distance=0.5,
                distance_trajectory=(1.0, 0.5),
                restart_count=0,
            )


class TestExperiments:
    def test_convergence_experiment_shape(self, model):
        reports = run_convergence_experiment(n_trials=5, generations=10, model=model)
        assert len(reports) == 5
        assert all(r.generations_run == 10 for r in reports)
        assert len({r.seed for r in reports}) == 5

    def test_summarize(self, model):
        reports = run_convergence_experiment(n_trials=5, generations=10, model=model)
        summary = summarize(reports)
        assert summary["count"] == 5
        assert summary["monotone_fraction"] == 1.0
        assert 0 <= summary["median_ratio"]

    def test_escape_landscape_geometry(self, model, seed_coeffs):
        landscape = make_escape_landscape(model)
        low, high = seed_coeffs
        # both seeds start outside the good basin and the low seed sits at the trap
        assert landscape.score(low) == pytest.approx(landscape.bad_floor)
        assert not landscape.escaped(low)
        assert not landscape.escaped(high)

    def test_escape_experiment_small(self, model):
        result = run_escape_experiment(n_pairs=12, generations=30, model=model)
        assert result["pairs"] == 12
        assert 0 <= result["escapes_without_restarts"] <= result["pairs"]
        assert result["n_plus"] + result["n_minus"] <= result["pairs"]
        assert 0.0 <= result["sign_test_p"] <= 1.0
