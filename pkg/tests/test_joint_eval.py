"""Joint-table ground truth: conditionals, AUC, MI, scorers, independence."""

import itertools
import random
from fractions import Fraction as F

import pytest

from crossgreed.errors import CapacityError, DatasetError
from crossgreed.joint_eval import (
    JointTable,
    auc_of_scorer,
    auc_star_joint,
    conditional_measure,
    from_factorized,
    independence_gap,
    mutual_information,
)
from crossgreed import synth

import oracles


def xor_table() -> JointTable:
    """Two binary columns; label 1 iff the values differ."""
    rows = {}
    for a in (0, 1):
        for b in (0, 1):
            rows[((a, b), a ^ b)] = F(1, 4)
    return JointTable([(0, (0, 1)), (1, (0, 1))], rows)


def llr_scorer(table, ids):
    p1 = conditional_measure(table, ids, 1)
    p0 = conditional_measure(table, ids, 0)
    scorer = {}
    for x in p1.outcomes:
        m1, m0 = p1.mass(x), p0.mass(x)
        if m0 == 0:
            scorer[x] = (1, F(0))
        elif m1 == 0:
            scorer[x] = (-1, F(0))
        else:
            scorer[x] = (0, F(m1) / F(m0))
    return scorer


class TestJointTable:
    def test_row_validation(self):
        with pytest.raises(ValueError, match="sum to 1"):
            JointTable([(0, (0, 1))], {((0,), 1): F(1, 2)})
        with pytest.raises(ValueError, match="label"):
            JointTable([(0, (0, 1))], {((0,), 2): F(1)})
        with pytest.raises(ValueError, match="vocabulary"):
            JointTable([(0, (0, 1))], {((7,), 1): F(1)})
        with pytest.raises(ValueError, match="arity"):
            JointTable([(0, (0, 1))], {((0, 0), 1): F(1)})

    def test_label_marginals(self):
        t = xor_table()
        assert t.label_marginal(0) == F(1, 2)
        assert t.label_marginal(1) == F(1, 2)

    def test_zero_mass_rows_dropped(self):
        t = JointTable([(0, (0, 1))], {((0,), 1): F(1, 2), ((1,), 0): F(1, 2),
                                       ((1,), 1): F(0)})
        assert len(t.rows) == 2


class TestConditionalMeasure:
    def test_empty_set_is_point_mass(self):
        m = conditional_measure(xor_table(), set(), 1)
        assert len(m) == 1 and m.mass(()) == 1

    def test_xor_single_column_is_uniform(self):
        t = xor_table()
        for label in (0, 1):
            for col in (0, 1):
                m = conditional_measure(t, {col}, label)
                assert sorted(m.masses) == [F(1, 2), F(1, 2)]

    def test_matches_marginalization_oracle(self):
        rng = random.Random(13)
        for _ in range(30):
            t = synth.random_joint_table(rng, 2, vocab_size=3)
            ids = {rng.randrange(2)} if rng.random() < 0.5 else {0, 1}
            positions = sorted(t._pos[c] for c in ids)
            for label in (0, 1):
                m = conditional_measure(t, ids, label)
                expected = oracles.marginalize_oracle(t.rows, positions, label)
                for x, mass in m.items():
                    assert mass == expected.get(x, F(0))

    def test_zero_marginal_rejected(self):
        t = JointTable([(0, (0, 1))], {((0,), 1): F(1, 2), ((1,), 1): F(1, 2)})
        with pytest.raises(DatasetError, match="marginal"):
            conditional_measure(t, {0}, 0)


class TestAucStarJoint:
    def test_xor_crossed_is_perfect(self):
        assert auc_star_joint(xor_table(), {0, 1}) == 1

    def test_xor_single_column_is_chance(self):
        assert auc_star_joint(xor_table(), {0}) == F(1, 2)
        assert auc_star_joint(xor_table(), {1}) == F(1, 2)

    def test_agrees_with_factorized_path_on_product_joints(self):
        rng = random.Random(19)
        for _ in range(25):
            obj = synth.random_nb_objective(rng, rng.randint(1, 3),
                                            vocab_range=(2, 3))
            pairs = [(cid, col.pair) for cid, col in obj.columns.items()]
            pr1 = F(rng.randint(1, 4), 5)
            table = from_factorized(pairs, pr1)
            subset = set(rng.sample(obj.universe(),
                                    rng.randint(1, len(obj.universe()))))
            assert auc_star_joint(table, subset) == obj.auc_star(subset)

    def test_pair_cap(self):
        t = synth.random_joint_table(random.Random(2), 2, vocab_size=4)
        with pytest.raises(CapacityError):
            auc_star_joint(t, {0, 1}, max_pairs=10)


class TestMutualInformation:
    def test_independent_label_is_zero(self):
        rows = {((v,), c): F(1, 8) for v in range(4) for c in (0, 1)}
        t = JointTable([(0, tuple(range(4)))], rows)
        assert mutual_information(t, {0}) == 0

    def test_deterministic_balanced_label_is_one_bit(self):
        assert mutual_information(xor_table(), {0, 1}) == 1

    def test_matches_float_oracle(self):
        rng = random.Random(23)
        for _ in range(25):
            t = synth.random_joint_table(rng, 2, vocab_size=3)
            ids = {0, 1} if rng.random() < 0.5 else {rng.randrange(2)}
            got = float(mutual_information(t, ids))
            cells = t.project(ids)
            assert got == pytest.approx(oracles.mi_oracle_bits(cells), abs=1e-12)

    def test_nonnegative(self):
        rng = random.Random(29)
        for _ in range(25):
            t = synth.random_joint_table(rng, 2)
            assert mutual_information(t, {0, 1}) >= -1e-15


class TestAucOfScorer:
    def test_constant_scorer_is_chance(self):
        t = xor_table()
        sigma = {x: 0 for x in itertools.product((0, 1), repeat=2)}
        assert auc_of_scorer(t, {0, 1}, sigma) == F(1, 2)

    def test_llr_attains_the_maximum(self):
        rng = random.Random(31)
        for _ in range(30):
            t = synth.random_joint_table(rng, 2, vocab_size=3)
            ids = {0, 1} if rng.random() < 0.5 else {rng.randrange(2)}
            sigma = llr_scorer(t, ids)
            assert auc_of_scorer(t, ids, sigma) == auc_star_joint(t, ids)

    def test_scorer_never_beats_the_maximum(self):
        rng = random.Random(37)
        for _ in range(20):
            t = synth.random_joint_table(rng, 2, vocab_size=3)
            ids = {0, 1}
            best = auc_star_joint(t, ids)
            support = conditional_measure(t, ids, 1).outcomes
            for _ in range(20):
                sigma = synth.random_scorer(rng, support)
                assert auc_of_scorer(t, ids, sigma) <= best

    def test_reversed_scorer_reflects_auc(self):
        rng = random.Random(41)
        for _ in range(15):
            t = synth.random_joint_table(rng, 2, vocab_size=3)
            ids = {0, 1}
            support = conditional_measure(t, ids, 1).outcomes
            sigma = synth.random_scorer(rng, support)
            neg = {x: -v for x, v in sigma.items()}
            assert auc_of_scorer(t, ids, neg) == 1 - auc_of_scorer(t, ids, sigma)

    def test_increasing_transform_invariance(self):
        t = xor_table()
        ids = {0, 1}
        support = conditional_measure(t, ids, 1).outcomes
        sigma = {x: i % 3 for i, x in enumerate(support)}
        txf = {x: 10 * v ** 3 + 5 for x, v in sigma.items()}
        assert auc_of_scorer(t, ids, sigma) == auc_of_scorer(t, ids, txf)

    def test_missing_value_raises(self):
        with pytest.raises(KeyError, match="missing"):
            auc_of_scorer(xor_table(), {0, 1}, {})

    def test_callable_scorer(self):
        value = auc_of_scorer(xor_table(), {0, 1}, lambda x: x[0] ^ x[1])
        assert value == 1


class TestIndependenceGap:
    def test_factorized_joint_has_zero_gap(self):
        rng = random.Random(43)
        obj = synth.random_nb_objective(rng, 3, vocab_range=(2, 3))
        pairs = [(cid, col.pair) for cid, col in obj.columns.items()]
        table = from_factorized(pairs, F(1, 3))
        assert independence_gap(table, {0, 1, 2}) == 0

    def test_xor_gap_is_one_quarter(self):
        assert independence_gap(xor_table(), {0, 1}) == F(1, 4)

    def test_empty_set(self):
        assert independence_gap(xor_table(), set()) == 0
