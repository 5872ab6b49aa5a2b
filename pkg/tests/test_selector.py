"""Selectors: greedy, lazy greedy, exhaustive, and their contracts."""

import random
from fractions import Fraction as F

import pytest

from crossgreed.errors import CapacityError
from crossgreed.measures import Measure
from crossgreed.nb_model import ColumnModel, ConditionalPair, NbObjective
from crossgreed.selector import (
    SearchReport,
    exhaustive_select,
    greedy_select,
    lazy_greedy_select,
)
from crossgreed import synth

ONE_MINUS_1_OVER_E = 1 - 1 / 2.718281828459045


def separating_column(cid):
    return ColumnModel.build(cid, ConditionalPair(
        p0=Measure([0, 1], [F(0), F(1)]),
        p1=Measure([0, 1], [F(1), F(0)])))


def weak_column(cid, tilt):
    return ColumnModel.build(cid, ConditionalPair(
        p0=Measure([0, 1], [F(1, 2), F(1, 2)]),
        p1=Measure([0, 1], [F(1, 2) + tilt, F(1, 2) - tilt])))


class TestGreedy:
    def test_k_zero(self):
        obj = synth.random_nb_objective(random.Random(0), 3)
        report = greedy_select(obj.f_of, obj.universe(), 0)
        assert report.selected == ()
        assert report.f_value is None

    def test_negative_k_rejected(self):
        obj = synth.random_nb_objective(random.Random(0), 3)
        with pytest.raises(ValueError):
            greedy_select(obj.f_of, obj.universe(), -1)

    def test_perfect_column_chosen_first_then_stops(self):
        obj = NbObjective([weak_column(0, F(1, 6)), separating_column(1),
                           weak_column(2, F(1, 8))])
        report = greedy_select(obj.f_of, obj.universe(), 3)
        assert report.selected[0] == 1
        assert report.f_trajectory[0] == 1
        # remaining gains are zero, so the default stops early
        assert report.selected == (1,)

    def test_pad_to_k_fills_budget_with_smallest_ids(self):
        obj = NbObjective([separating_column(0), weak_column(1, F(1, 8)),
                           weak_column(2, F(1, 8))])
        report = greedy_select(obj.f_of, obj.universe(), 3, pad_to_k=True)
        assert report.selected == (0, 1, 2)
        assert report.gains[1:] == (0, 0)

    def test_k_larger_than_universe_clamps(self):
        obj = synth.random_nb_objective(random.Random(1), 2)
        report = greedy_select(obj.f_of, obj.universe(), 10, pad_to_k=True)
        assert set(report.selected) == set(obj.universe())

    def test_trajectory_monotone_and_gains_nonincreasing(self):
        rng = random.Random(3)
        for _ in range(25):
            obj = synth.random_nb_objective(rng, rng.randint(2, 6))
            report = greedy_select(obj.f_of, obj.universe(), 4)
            assert list(report.f_trajectory) == sorted(report.f_trajectory)
            gains = list(report.gains)
            assert gains == sorted(gains, reverse=True)

    def test_determinism(self):
        obj1 = synth.random_nb_objective(random.Random(7), 5)
        obj2 = synth.random_nb_objective(random.Random(7), 5)
        r1 = greedy_select(obj1.f_of, obj1.universe(), 3)
        r2 = greedy_select(obj2.f_of, obj2.universe(), 3)
        assert r1 == r2


class TestLazyGreedy:
    def test_matches_greedy_on_random_instances(self):
        rng = random.Random(11)
        for _ in range(40):
            obj_a = synth.random_nb_objective(rng, rng.randint(2, 7))
            k = rng.randint(1, 4)
            greedy = greedy_select(obj_a.f_of, obj_a.universe(), k)
            lazy = lazy_greedy_select(obj_a.f_of, obj_a.universe(), k)
            assert lazy.selected == greedy.selected
            assert lazy.gains == greedy.gains
            assert lazy.evaluations <= greedy.evaluations
            assert lazy.stale_bound_violations == 0

    def test_matches_greedy_with_padding(self):
        obj = NbObjective([separating_column(0), weak_column(1, F(1, 8)),
                           weak_column(2, F(1, 8))])
        greedy = greedy_select(obj.f_of, obj.universe(), 3, pad_to_k=True)
        lazy = lazy_greedy_select(obj.f_of, obj.universe(), 3, pad_to_k=True)
        assert lazy.selected == greedy.selected == (0, 1, 2)

    def test_saves_evaluations_often(self):
        rng = random.Random(13)
        cheaper = 0
        trials = 40
        for _ in range(trials):
            obj = synth.random_nb_objective(rng, 8)
            k = 4
            lazy = lazy_greedy_select(obj.f_of, obj.universe(), k)
            if lazy.evaluations < 8 * k:
                cheaper += 1
        assert cheaper >= trials // 2

    def test_flags_stale_bound_violations_on_non_submodular_handle(self):
        # supermodular pair bonus: gains grow as the set grows
        def f(subset):
            return len(subset) ** 2

        lazy = lazy_greedy_select(f, range(4), 3)
        assert lazy.stale_bound_violations > 0
        assert len(lazy.selected) == 3


class TestExhaustive:
    def test_full_universe_when_k_equals_n(self):
        obj = synth.random_nb_objective(random.Random(17), 4)
        report = exhaustive_select(obj.f_of, obj.universe(), 4)
        assert set(report.selected) == set(obj.universe())

    def test_single_best_column(self):
        obj = NbObjective([weak_column(0, F(1, 8)), separating_column(1)])
        report = exhaustive_select(obj.f_of, obj.universe(), 1)
        assert report.selected == (1,)

    def test_dominates_greedy(self):
        rng = random.Random(19)
        for _ in range(30):
            obj = synth.random_nb_objective(rng, rng.randint(2, 6))
            k = rng.randint(1, 3)
            greedy = greedy_select(obj.f_of, obj.universe(), k, pad_to_k=True)
            best = exhaustive_select(obj.f_of, obj.universe(), k)
            assert best.f_value >= greedy.f_value

    def test_lexicographic_tie_break(self):
        # two identical blocks: {0,1} and {2,3} give equal F
        pair = synth.random_conditional_pair(random.Random(5), 3)
        obj = NbObjective([ColumnModel.build(i, pair) for i in range(4)])
        report = exhaustive_select(obj.f_of, obj.universe(), 2)
        assert report.selected == (0, 1)

    def test_candidate_cap(self):
        obj = synth.random_nb_objective(random.Random(23), 12, vocab_range=(2, 2))
        with pytest.raises(CapacityError):
            exhaustive_select(obj.f_of, obj.universe(), 6, max_candidates=100)


class TestGuarantee:
    def test_greedy_attains_constant_factor(self):
        rng = random.Random(29)
        worst = 1.0
        for _ in range(60):
            obj = synth.random_nb_objective(rng, rng.randint(2, 6),
                                            vocab_range=(2, 4))
            k = rng.randint(1, 4)
            greedy = greedy_select(obj.f_of, obj.universe(), k, pad_to_k=True)
            best = exhaustive_select(obj.f_of, obj.universe(), k)
            if best.f_value == 0:
                assert greedy.f_value == 0
                continue
            ratio = greedy.f_value / best.f_value
            worst = min(worst, float(ratio))
            assert ratio >= F(632, 1000)
        assert worst >= ONE_MINUS_1_OVER_E


def test_report_is_frozen():
    report = SearchReport("greedy", (), (), (), 0)
    with pytest.raises(AttributeError):
        report.selected = (1,)
