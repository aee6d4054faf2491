import math
from itertools import product

import numpy as np
import pytest

from kellylab.growth_opt import ReturnMatrix, ScenarioSet, expected_log_growth
from kellylab.info_measures import entropy
from kellylab.type_class import sequence_return
from kellylab.winner_fraction import (
    entropy_bound_check,
    max_sequence_return,
    winner_probabilities,
)


def random_positive_scenarios(rng, m=None, rows=10):
    m = int(rng.integers(2, 6)) if m is None else m
    return ScenarioSet(rng.dirichlet(np.ones(rows)), rng.lognormal(0, 0.6, size=(rows, m)))


class TestWinnerProbabilities:
    def test_dominant_asset(self):
        s = ScenarioSet([0.3, 0.7], [[2.0, 1.0, 0.5], [1.5, 1.2, 1.4]])
        np.testing.assert_array_equal(winner_probabilities(s), [1.0, 0.0, 0.0])

    def test_horse_race(self):
        w = winner_probabilities(ScenarioSet.horse_race([0.7, 0.3], [2, 2]))
        np.testing.assert_allclose(w, [0.7, 0.3], rtol=0, atol=1e-15)

    def test_ties_split(self):
        s = ScenarioSet([0.4, 0.6], [[1.2, 1.2], [0.8, 0.8]])
        np.testing.assert_array_equal(winner_probabilities(s), [0.5, 0.5])

    def test_partial_tie(self):
        s = ScenarioSet([0.5, 0.5], [[2.0, 2.0, 1.0], [1.0, 1.0, 3.0]])
        np.testing.assert_allclose(winner_probabilities(s), [0.25, 0.25, 0.5])


class TestEntropyBound:
    def test_pointwise_dominant(self):
        s = ScenarioSet([0.5, 0.5], [[1.3, 1.0], [0.9, 0.8]])
        res = entropy_bound_check(s)
        assert res.entropy_bound == 0.0
        assert res.gap == pytest.approx(0.0, abs=1e-12)
        assert res.status == "satisfied"

    def test_horse_race_consistency(self):
        p = [0.2, 0.5, 0.3]
        res = entropy_bound_check(ScenarioSet.horse_race(p, [5.0, 2.0, 3.0]))
        np.testing.assert_allclose(res.w_prime, p, atol=1e-15)
        np.testing.assert_allclose(res.w_star, p, atol=1e-6)
        assert res.gap == pytest.approx(0.0, abs=1e-12)
        assert res.entropy_bound == pytest.approx(entropy(p))

    def test_bound_random(self):
        rng = np.random.default_rng(500)
        for _ in range(500):
            s = random_positive_scenarios(rng, m=3)
            res = entropy_bound_check(s)
            assert res.gap >= -1e-10
            assert res.gap <= res.entropy_bound + 1e-9
            assert res.entropy_bound <= math.log(s.m) + 1e-12
            assert res.status == "satisfied"

    def test_growths_match_direct_evaluation(self):
        rng = np.random.default_rng(501)
        s = random_positive_scenarios(rng)
        res = entropy_bound_check(s)
        assert res.heuristic_growth == expected_log_growth(s, res.w_prime)
        assert res.optimal_growth == expected_log_growth(s, res.w_star)

    def test_json_fields(self):
        res = entropy_bound_check(ScenarioSet([0.5, 0.5], [[2.0, 1.0], [0.5, 1.0]]))
        d = res.as_dict()
        for key in ("w_prime", "w_star", "g_star_nats", "g_prime_nats", "gap_bits", "entropy_bound_bits"):
            assert key in d
        assert d["entropy_bound_bits"] == pytest.approx(1.0)


class TestSharpness:
    @staticmethod
    def scaling_path(s, asset, scales):
        out = []
        for c in scales:
            R = np.array(s.returns)
            R[:, asset] *= c
            out.append(entropy_bound_check(ScenarioSet(s.probs, R)))
        return out

    def test_entropy_falls_and_gap_vanishes(self):
        rng = np.random.default_rng(502)
        for _ in range(30):
            s = random_positive_scenarios(rng)
            top = int(np.argmax(winner_probabilities(s)))
            needed = float(np.max(s.returns.max(axis=1) / s.returns[:, top]))
            path = self.scaling_path(s, top, np.geomspace(1.0, 2.0 * needed, 5))
            hs = [r.entropy_bound for r in path]
            assert all(b <= a + 1e-12 for a, b in zip(hs, hs[1:]))
            assert all(r.gap <= r.entropy_bound + 1e-9 for r in path)
            assert hs[-1] == 0.0
            assert path[-1].gap <= 1e-6

    def test_gap_is_not_monotone(self):
        # the gap can rise before it collapses: rows (2c, 1) and (c/2, 1)
        s = ScenarioSet([0.5, 0.5], [[2.0, 1.0], [0.5, 1.0]])
        path = self.scaling_path(s, 0, [1.0, 1.5, 2.0, 3.0])
        gaps = [r.gap for r in path]
        assert gaps[0] == pytest.approx(0.0, abs=1e-12)
        assert gaps[1] == pytest.approx(0.5 * math.log(9 / 7), abs=1e-10)
        assert gaps[3] == pytest.approx(0.0, abs=1e-12)
        assert gaps[1] > gaps[0]


class TestMaxSequence:
    def test_two_by_two(self):
        best = max_sequence_return(ReturnMatrix([[1.1, 1.2], [0.9, 1.3]]))
        assert best.path == (0, 1)
        assert best.r_max == pytest.approx(1.43, rel=1e-15)

    def test_single_asset(self):
        best = max_sequence_return(ReturnMatrix([[1.1, 0.9, 1.2]]))
        assert best.path == (0, 0, 0)
        assert best.r_max == pytest.approx(1.1 * 0.9 * 1.2, rel=1e-15)

    def test_tie_goes_to_lowest_index(self):
        best = max_sequence_return(ReturnMatrix([[1.1, 1.0], [1.1, 0.5]]))
        assert best.path == (0, 0)
        assert best.r_max == pytest.approx(1.1)

    def test_dominates_enumeration(self):
        rng = np.random.default_rng(503)
        for m in (1, 2, 3):
            for n in range(1, 9):
                matrix = ReturnMatrix(rng.lognormal(0, 0.4, size=(m, n)))
                brute = max(sequence_return(s, matrix) for s in product(range(m), repeat=n))
                assert max_sequence_return(matrix).r_max == pytest.approx(brute, rel=1e-12)
