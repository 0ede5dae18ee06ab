from __future__ import annotations

import numpy as np
import pytest

from evoforge.errors import ValidationError
from evoforge.evolution import Individual, make_rng
from evoforge.judges import DeceptiveTwoClusterJudge, SimulatedJudge, judge


def ind(genes, id_):
    return Individual(genes=np.asarray(genes, dtype=np.float64), id=id_, origin="seed")


class TestSimulatedJudge:
    def test_prefers_closer(self):
        j = SimulatedJudge(target=np.zeros(4))
        a, b = ind([0, 0, 0, 0], "a"), ind([1, 1, 1, 1], "b")
        rng = make_rng(0)
        assert all(judge(j, a, b, rng).chosen == "a" for _ in range(20))

    def test_order_independent_when_noiseless(self):
        j = SimulatedJudge(target=np.zeros(4))
        near, far = ind([0.1, 0, 0, 0], "near"), ind([5, 5, 5, 5], "far")
        rng = make_rng(1)
        assert judge(j, far, near, rng).chosen == "near"
        assert judge(j, near, far, rng).chosen == "near"

    def test_tie_prefers_first(self):
        j = SimulatedJudge(target=np.zeros(3))
        a, b = ind([1, 0, 0], "a"), ind([0, 1, 0], "b")
        rng = make_rng(2)
        assert judge(j, a, b, rng).chosen == "a"
        same = ind([1, 0, 0], "twin")
        assert judge(j, a, same, rng).chosen == "a"

    def test_flip_rate(self):
        j = SimulatedJudge(target=np.zeros(2), noise=0.3)
        a, b = ind([0, 0], "a"), ind([3, 3], "b")
        rng = make_rng(1234)
        n = 10_000
        flips = sum(judge(j, a, b, rng).chosen == "b" for _ in range(n))
        assert 0.29 <= flips / n <= 0.31

    def test_noise_range_validated(self):
        with pytest.raises(ValidationError):
            SimulatedJudge(target=np.zeros(2), noise=0.6)
        with pytest.raises(ValidationError):
            SimulatedJudge(target=np.array([np.nan, 0.0]))

    def test_metric_locked(self):
        with pytest.raises(ValidationError):
            SimulatedJudge(target=np.zeros(2), metric="cosine")


class TestDeceptiveJudge:
    def test_scores_ignore_higher_axes(self):
        j = DeceptiveTwoClusterJudge(
            bad_center=np.array([1.0, 0.0]),
            good_center=np.array([-3.0, 0.0]),
            bad_floor=2.0,
        )
        base = np.array([1.0, 0.0, 0.0, 0.0])
        shifted = np.array([1.0, 0.0, 50.0, -50.0])
        assert j.score(base) == j.score(shifted)

    def test_two_basin_structure(self):
        j = DeceptiveTwoClusterJudge(
            bad_center=np.array([2.0, 0.0]),
            good_center=np.array([-4.0, 0.0]),
            bad_floor=2.0,
        )
        assert j.score(np.array([2.0, 0.0])) == pytest.approx(2.0)  # floor at bad center
        assert j.score(np.array([-4.0, 0.0])) == pytest.approx(0.0)  # true optimum
        assert j.escaped(np.array([-4.5, 0.0]))
        assert not j.escaped(np.array([2.0, 0.0]))
