"""Seeded random instance generators.

Everything here is a pure function of an explicit ``random.Random``
source, so suites and benchmarks are reproducible run to run.  Exact
instances draw integer counts and normalize to rationals, which keeps
every downstream identity checkable with exact arithmetic.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Sequence

from .measures import Involution, Measure
from .nb_model import ColumnModel, ConditionalPair, NbObjective
from .joint_eval import JointTable


def random_exact_measure(rng: random.Random, size: int, *,
                         max_count: int = 6, allow_zero: bool = True) -> Measure:
    """A measure on 0..size-1 with masses count_i / total."""
    low = 0 if allow_zero else 1
    counts = [rng.randint(low, max_count) for _ in range(size)]
    if sum(counts) == 0:
        counts[rng.randrange(size)] = 1
    return Measure.from_counts(range(size), counts)


def random_conditional_pair(rng: random.Random, vocab_size: int, *,
                            max_count: int = 6, allow_zero: bool = True,
                            exact: bool = True) -> ConditionalPair:
    """Two conditional laws on a shared vocabulary 0..vocab_size-1."""

    def masses():
        low = 0 if allow_zero else 1
        counts = [rng.randint(low, max_count) for _ in range(vocab_size)]
        if sum(counts) == 0:
            counts[rng.randrange(vocab_size)] = 1
        total = sum(counts)
        if exact:
            return [Fraction(c, total) for c in counts]
        return [c / total for c in counts]

    p0 = Measure(range(vocab_size), masses())
    p1 = Measure(range(vocab_size), masses())
    return ConditionalPair(p0=p0, p1=p1)


def random_nb_objective(rng: random.Random, n_columns: int, *,
                        vocab_range: tuple[int, int] = (2, 5),
                        max_count: int = 6, allow_zero: bool = True,
                        exact: bool = True, **objective_kwargs) -> NbObjective:
    """A factorized objective over columns 0..n_columns-1."""
    columns = []
    for cid in range(n_columns):
        vocab = rng.randint(*vocab_range)
        pair = random_conditional_pair(rng, vocab, max_count=max_count,
                                       allow_zero=allow_zero, exact=exact)
        columns.append(ColumnModel.build(cid, pair))
    return NbObjective(columns, **objective_kwargs)


def lattice_nb_objective(rng: random.Random, n_columns: int, *,
                         vocab_range: tuple[int, int] = (2, 20),
                         count_range: tuple[int, int] = (1, 4)) -> list[ColumnModel]:
    """Float-mode columns whose score values live on a small log lattice.

    Per-outcome counts are drawn from a narrow integer range, so scores
    are sums from a handful of log-ratios and convolved distributions
    stay compact under grid merging.
    """
    columns = []
    for cid in range(n_columns):
        vocab = rng.randint(*vocab_range)

        def masses():
            counts = [rng.randint(*count_range) for _ in range(vocab)]
            total = sum(counts)
            return [c / total for c in counts]

        pair = ConditionalPair(p0=Measure(range(vocab), masses()),
                               p1=Measure(range(vocab), masses()))
        columns.append(ColumnModel.build(cid, pair))
    return columns


def random_joint_table(rng: random.Random, n_columns: int, *,
                       vocab_size: int = 3, max_count: int = 5,
                       fill: float = 0.7) -> JointTable:
    """A sparse exact joint law with both label classes populated."""
    import itertools

    columns = [(cid, tuple(range(vocab_size))) for cid in range(n_columns)]
    cells = [(combo, label)
             for combo in itertools.product(range(vocab_size), repeat=n_columns)
             for label in (0, 1)]
    weights = {}
    for cell in cells:
        if rng.random() < fill:
            weights[cell] = rng.randint(1, max_count)
    for label in (0, 1):  # keep both marginals positive
        if not any(c[1] == label for c in weights):
            combo = tuple(rng.randrange(vocab_size) for _ in range(n_columns))
            weights[(combo, label)] = rng.randint(1, max_count)
    total = sum(weights.values())
    rows = {cell: Fraction(w, total) for cell, w in weights.items()}
    return JointTable(columns, rows)


def random_involution(rng: random.Random, outcomes: Sequence) -> Involution:
    """A uniform random pairing (with possible fixed points)."""
    pool = list(outcomes)
    rng.shuffle(pool)
    mapping = {}
    while pool:
        x = pool.pop()
        if pool and rng.random() < 0.7:
            y = pool.pop()
            mapping[x] = y
            mapping[y] = x
        else:
            mapping[x] = x
    return Involution(mapping)


def equivalent_pair(rng: random.Random, size: int, *,
                    max_count: int = 6) -> tuple[Measure, Measure, Involution]:
    """A measure, its relabeling under a random involution, and the map."""
    p = random_exact_measure(rng, size, max_count=max_count)
    f = random_involution(rng, p.outcomes)
    q = Measure(p.outcomes, [p.mass(f(x)) for x in p.outcomes])
    return p, q, f


def random_homogeneous_phi(rng: random.Random) -> Callable:
    """A random positively-homogeneous bivariate function (degree one)."""
    alpha = Fraction(rng.randint(-4, 4))
    beta = Fraction(rng.randint(-4, 4))
    gamma = Fraction(rng.randint(0, 4))
    lam = Fraction(rng.randint(0, 3))
    delta = Fraction(rng.randint(-3, 3))

    def phi(a, b):
        return alpha * a + beta * b + gamma * abs(a - lam * b) + delta * max(a, b)

    return phi


def random_scorer(rng: random.Random, outcomes: Sequence, *,
                  n_levels: int = 4) -> dict:
    """A random score map with deliberate ties (few distinct levels)."""
    levels = sorted(rng.uniform(-3.0, 3.0) for _ in range(n_levels))
    return {x: rng.choice(levels) for x in outcomes}
