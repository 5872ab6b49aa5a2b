"""Score distributions: construction, convolution, AUC read-out."""

import math
import random
from fractions import Fraction as F

import pytest

from crossgreed.errors import CapacityError, DomainMismatchError
from crossgreed.measures import Measure, commutator_tv
from crossgreed import score_dist as sd
from crossgreed import synth

import oracles


def pair_measures(p1_masses, p0_masses):
    n = len(p1_masses)
    return (Measure(range(n), p1_masses), Measure(range(n), p0_masses))


THREE_ATOM = pair_measures([F(1, 2), F(1, 4), F(1, 4)],
                           [F(1, 4), F(1, 4), F(1, 2)])


def dist_atoms(d):
    """(rank, ratio) keyed atoms for comparison against oracles."""
    out = []
    for atom in d.atoms:
        s = atom.score
        if not s.is_finite:
            key = oracles.POS if s.log_value > 0 else oracles.NEG
        elif s.ratio is not None:
            key = oracles.finite(s.ratio)
        else:
            key = (0, s.log_value)
        out.append((key, atom.w1, atom.w0))
    return out


class TestFromConditionalPair:
    def test_identical_laws_single_tie_atom(self):
        p1 = Measure.uniform([0, 1])
        d = sd.from_conditional_pair(p1, p1)
        assert len(d) == 1
        (atom,) = d.atoms
        assert atom.score.ratio == 1 and atom.w1 == 1 and atom.w0 == 1

    def test_disjoint_supports(self):
        p1, p0 = pair_measures([F(1), F(0)], [F(0), F(1)])
        d = sd.from_conditional_pair(p1, p0)
        scores = sorted((a.score.log_value, a.w1, a.w0) for a in d.atoms)
        assert scores == [(-math.inf, 0, 1), (math.inf, 1, 0)]

    def test_three_outcome_example(self):
        d = sd.from_conditional_pair(*THREE_ATOM)
        got = {a.score.ratio: (a.w1, a.w0) for a in d.atoms}
        assert got == {
            F(2): (F(1, 2), F(1, 4)),
            F(1): (F(1, 4), F(1, 4)),
            F(1, 2): (F(1, 4), F(1, 2)),
        }

    def test_equal_ratios_merge(self):
        p1, p0 = pair_measures([F(1, 4), F(1, 4), F(1, 2)],
                               [F(1, 8), F(1, 8), F(3, 4)])
        d = sd.from_conditional_pair(p1, p0)
        assert len(d) == 2  # outcomes 0 and 1 share ratio 2
        merged = {a.score.ratio: (a.w1, a.w0) for a in d.atoms}
        assert merged[F(2)] == (F(1, 2), F(1, 4))

    def test_mass_accounting(self):
        rng = random.Random(3)
        for _ in range(30):
            pair = synth.random_conditional_pair(rng, rng.randint(1, 6))
            d = sd.from_conditional_pair(pair.p1, pair.p0)
            assert d.total_w1 == 1 and d.total_w0 == 1
            for atom in d.atoms:
                if atom.score.log_value == math.inf:
                    assert atom.w0 == 0
                if atom.score.log_value == -math.inf:
                    assert atom.w1 == 0
                assert atom.w1 > 0 or atom.w0 > 0

    def test_domain_and_mode_mismatch(self):
        with pytest.raises(DomainMismatchError):
            sd.from_conditional_pair(Measure.uniform([0, 1]), Measure.uniform([1, 2]))
        with pytest.raises(DomainMismatchError):
            sd.from_conditional_pair(Measure.uniform([0, 1]),
                                     Measure.uniform([0, 1], exact=False))


class TestConvolve:
    def test_identity_element(self):
        d = sd.from_conditional_pair(*THREE_ATOM)
        out = sd.convolve(d, sd.identity_distribution())
        assert dist_atoms(out) == dist_atoms(d)

    def test_disjoint_selfconvolution_drops_mixed_infinities(self):
        p1, p0 = pair_measures([F(1), F(0)], [F(0), F(1)])
        d = sd.from_conditional_pair(p1, p0)
        out = sd.convolve(d, d)
        scores = sorted((a.score.log_value, a.w1, a.w0) for a in out.atoms)
        assert scores == [(-math.inf, 0, 1), (math.inf, 1, 0)]

    def test_three_atom_selfconvolution_matches_oracle(self):
        d = sd.from_conditional_pair(*THREE_ATOM)
        out = sd.convolve(d, d)
        expected = oracles.convolve_oracle(dist_atoms(d), dist_atoms(d))
        assert {k: (w1, w0) for k, w1, w0 in dist_atoms(out)} == expected
        assert len(out) == 5
        ratios = sorted(a.score.ratio for a in out.atoms)
        assert ratios == [F(1, 4), F(1, 2), F(1), F(2), F(4)]

    def test_commutative_and_associative(self):
        rng = random.Random(17)
        for _ in range(25):
            dists = []
            for _ in range(3):
                pair = synth.random_conditional_pair(rng, rng.randint(1, 4))
                dists.append(sd.from_conditional_pair(pair.p1, pair.p0))
            a, b, c = dists
            assert dist_atoms(sd.convolve(a, b)) == dist_atoms(sd.convolve(b, a))
            left = sd.convolve(sd.convolve(a, b), c)
            right = sd.convolve(a, sd.convolve(b, c))
            assert dist_atoms(left) == dist_atoms(right)

    def test_atom_cap(self):
        pair = synth.random_conditional_pair(random.Random(0), 6, allow_zero=False)
        d = sd.from_conditional_pair(pair.p1, pair.p0)
        with pytest.raises(CapacityError, match="cap"):
            sd.convolve(d, d, max_atoms=4)

    def test_pruning_rejected_in_exact_mode(self):
        d = sd.identity_distribution()
        with pytest.raises(ValueError, match="float"):
            sd.convolve(d, d, prune_eps=1e-9)

    def test_mode_mixing_rejected(self):
        with pytest.raises(DomainMismatchError):
            sd.convolve(sd.identity_distribution(True),
                        sd.identity_distribution(False))


class TestAuc:
    def test_single_tie_atom(self):
        assert sd.auc_from_scores(sd.identity_distribution()) == F(1, 2)
        assert sd.f_value_from_scores(sd.identity_distribution()) == 0

    def test_perfect_separation(self):
        p1, p0 = pair_measures([F(1), F(0)], [F(0), F(1)])
        d = sd.from_conditional_pair(p1, p0)
        assert sd.auc_from_scores(d) == 1
        assert sd.f_value_from_scores(d) == 1

    def test_three_atom_example(self):
        d = sd.from_conditional_pair(*THREE_ATOM)
        assert sd.auc_from_scores(d) == F(21, 32)
        assert sd.f_value_from_scores(d) == F(5, 16)
        assert oracles.auc_pairs_oracle(dist_atoms(d)) == F(21, 32)

    def test_matches_commutator_identity(self):
        rng = random.Random(29)
        for _ in range(60):
            pair = synth.random_conditional_pair(rng, rng.randint(1, 8))
            d = sd.from_conditional_pair(pair.p1, pair.p0)
            auc = sd.auc_from_scores(d)
            assert auc == F(1, 2) + commutator_tv(pair.p1, pair.p0) / 2
            assert auc == oracles.auc_pairs_oracle(dist_atoms(d))
            assert F(1, 2) <= auc <= 1

    def test_invariant_under_score_shift(self):
        # convolving with a point atom shifts every score, preserving order
        rng = random.Random(31)
        for _ in range(20):
            pair = synth.random_conditional_pair(rng, rng.randint(1, 6))
            d = sd.from_conditional_pair(pair.p1, pair.p0)
            shift = sd.ScoreDistribution(
                exact_atoms=[((0, 3, 7), F(1), F(1))])
            assert sd.auc_from_scores(sd.convolve(d, shift)) == sd.auc_from_scores(d)

    def test_invariant_under_increasing_remap(self):
        # cubing the ratios is a strictly increasing remap of finite scores
        rng = random.Random(37)
        for _ in range(20):
            pair = synth.random_conditional_pair(rng, rng.randint(1, 6))
            d = sd.from_conditional_pair(pair.p1, pair.p0)
            remapped = []
            for (rank, num, den), w1, w0 in d._exact_atoms:
                if rank == 0:
                    remapped.append(((0, num ** 3, den ** 3), w1, w0))
                else:
                    remapped.append(((rank, num, den), w1, w0))
            d2 = sd.ScoreDistribution(exact_atoms=remapped)
            assert sd.auc_from_scores(d2) == sd.auc_from_scores(d)


class TestFloatPath:
    def float_pair(self, rng, size):
        pair = synth.random_conditional_pair(rng, size, exact=False)
        return sd.from_conditional_pair(pair.p1, pair.p0)

    def test_agrees_with_exact_on_same_counts(self):
        rng = random.Random(41)
        for _ in range(20):
            size = rng.randint(1, 6)
            counts1 = [rng.randint(0, 6) for _ in range(size)]
            counts0 = [rng.randint(0, 6) for _ in range(size)]
            if sum(counts1) == 0:
                counts1[0] = 1
            if sum(counts0) == 0:
                counts0[0] = 1
            exact = sd.from_conditional_pair(
                Measure.from_counts(range(size), counts1),
                Measure.from_counts(range(size), counts0))
            floaty = sd.from_conditional_pair(
                Measure.from_counts(range(size), counts1, exact=False),
                Measure.from_counts(range(size), counts0, exact=False))
            a = sd.convolve(exact, exact)
            b = sd.convolve(floaty, floaty)
            assert sd.auc_from_scores(b) == pytest.approx(
                float(sd.auc_from_scores(a)), abs=1e-9)

    def test_pruned_error_bound_is_honored(self):
        rng = random.Random(43)
        for _ in range(25):
            a = self.float_pair(rng, rng.randint(2, 8))
            b = self.float_pair(rng, rng.randint(2, 8))
            c = self.float_pair(rng, rng.randint(2, 8))
            full = sd.convolve(sd.convolve(a, b), c)
            eps = 10 ** rng.uniform(-6, -2)
            pruned = sd.convolve(sd.convolve(a, b, prune_eps=eps), c, prune_eps=eps)
            bound = sd.auc_error_bound(pruned)
            exact_auc = sd.auc_from_scores(full)
            pruned_auc = sd.auc_from_scores(pruned)
            assert abs(exact_auc - pruned_auc) <= bound + 1e-15
            assert (pruned.total_w1 + pruned.pruned_mass_w1) == pytest.approx(1.0, abs=1e-12)
            assert (pruned.total_w0 + pruned.pruned_mass_w0) == pytest.approx(1.0, abs=1e-12)

    def test_exact_mode_bound_is_zero(self):
        assert sd.auc_error_bound(sd.identity_distribution()) == 0

    def test_float_scores_merge_on_grid(self):
        p1 = Measure(range(4), [0.25, 0.25, 0.25, 0.25])
        p0 = Measure(range(4), [0.125, 0.125, 0.375, 0.375])
        d = sd.from_conditional_pair(p1, p0)
        assert len(d) == 2  # two ratio classes


class TestExtendedScore:
    def test_ordering(self):
        neg = sd.ExtendedScore.neg_inf()
        pos = sd.ExtendedScore.pos_inf()
        half = sd.ExtendedScore.from_ratio(F(1, 2))
        two = sd.ExtendedScore.from_ratio(F(2))
        assert neg < half < two < pos
        assert sd.ExtendedScore.from_ratio(F(2, 5)) < sd.ExtendedScore.from_ratio(F(1, 2))

    def test_nonpositive_ratio_rejected(self):
        with pytest.raises(ValueError):
            sd.ExtendedScore.from_ratio(F(0))

    def test_from_log_handles_infinities(self):
        assert not sd.ExtendedScore.from_log(math.inf).is_finite
        assert sd.ExtendedScore.from_log(0.25).is_finite


def test_backend_name_exposed():
    assert sd.BACKEND in ("cython", "numpy")
