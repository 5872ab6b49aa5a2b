"""The conditionally-independent feature-cross objective.

Holds one pair of label-conditional measures per feature column and
evaluates the set function

    F(A) = d_TV( (prod_{a in A} P1_a) x (prod_{a in A} P0_a),
                 (prod_{a in A} P0_a) x (prod_{a in A} P1_a) )

through the score-distribution path: per-column score laws are cached at
build time and convolved over A, with F read off as 2 * AUC - 1.  When
columns are conditionally independent given the label this F is monotone
submodular, which is what licenses greedy search.

:meth:`NbObjective.auc_star_exact` is the independent oracle: it
materializes the product measures and enumerates outcome pairs, never
touching the convolution path.
"""

from __future__ import annotations

import threading
from collections import OrderedDict
from dataclasses import dataclass
from fractions import Fraction
from typing import AbstractSet, Hashable, Iterable, Sequence

from . import score_dist
from .errors import CapacityError
from .measures import Measure, commutator_tv, product_measure

ColumnId = Hashable

#: Default cap on |V_A|^2 for the exact enumeration oracle.
DEFAULT_ORACLE_PAIR_CAP = 10_000_000

#: Default number of convolved distributions kept hot for reuse.
DEFAULT_CACHE_SIZE = 256


@dataclass(frozen=True, slots=True)
class ConditionalPair:
    """Label-conditional measures (P0, P1) of one feature column."""

    p0: Measure
    p1: Measure

    def __post_init__(self):
        if self.p0.outcome_set() != self.p1.outcome_set():
            raise ValueError("conditional measures need a common vocabulary")
        if self.p0.exact != self.p1.exact:
            raise ValueError("conditional measures must share an arithmetic mode")

    @property
    def exact(self) -> bool:
        return self.p0.exact


@dataclass(frozen=True, slots=True)
class ColumnModel:
    """One feature column with its cached score distribution."""

    column_id: ColumnId
    pair: ConditionalPair
    score_dist: score_dist.ScoreDistribution

    @classmethod
    def build(cls, column_id: ColumnId, pair: ConditionalPair) -> "ColumnModel":
        return cls(column_id, pair, score_dist.from_conditional_pair(pair.p1, pair.p0))

    @property
    def vocabulary(self) -> tuple:
        return self.pair.p1.outcomes


class NbObjective:
    """F(A) and auc*(A) over a fixed dictionary of feature columns.

    Convolved distributions for recently evaluated sets are cached so the
    nested sets visited by greedy search cost one extra convolution each.
    ``eval_count`` tracks semantic F evaluations (not convolutions);
    concurrent evaluation is safe.
    """

    def __init__(self, columns: Iterable[ColumnModel], *,
                 prune_eps: float = 0.0,
                 max_atoms: int = score_dist.DEFAULT_ATOM_CAP,
                 cache_size: int = DEFAULT_CACHE_SIZE):
        cols = {}
        for col in columns:
            if col.column_id in cols:
                raise ValueError(f"duplicate column id {col.column_id!r}")
            cols[col.column_id] = col
        if not cols:
            raise ValueError("need at least one column")
        modes = {col.pair.exact for col in cols.values()}
        if len(modes) != 1:
            raise ValueError("all columns must share an arithmetic mode")
        self.columns: dict[ColumnId, ColumnModel] = cols
        self.exact: bool = modes.pop()
        self.prune_eps = float(prune_eps)
        self.max_atoms = int(max_atoms)
        self._cache: OrderedDict[frozenset, score_dist.ScoreDistribution] = OrderedDict()
        self._cache_size = int(cache_size)
        self._lock = threading.Lock()
        self._eval_count = 0

    # -- bookkeeping -------------------------------------------------------

    @property
    def eval_count(self) -> int:
        return self._eval_count

    def universe(self) -> list[ColumnId]:
        return sorted(self.columns)

    def _require_known(self, ids: AbstractSet[ColumnId]) -> frozenset:
        unknown = set(ids) - self.columns.keys()
        if unknown:
            raise KeyError(f"unknown column ids: {sorted(unknown, key=repr)}")
        return frozenset(ids)

    def _cache_put(self, key: frozenset, dist) -> None:
        self._cache[key] = dist
        self._cache.move_to_end(key)
        while len(self._cache) > self._cache_size:
            self._cache.popitem(last=False)

    def _convolve(self, a, b):
        return score_dist.convolve(a, b, prune_eps=self.prune_eps,
                                   max_atoms=self.max_atoms)

    def _dist_of(self, ids: frozenset) -> score_dist.ScoreDistribution:
        if not ids:
            return score_dist.identity_distribution(self.exact)
        cached = self._cache.get(ids)
        if cached is not None:
            self._cache.move_to_end(ids)
            return cached
        if len(ids) == 1:
            (only,) = ids
            return self.columns[only].score_dist
        # Prefer extending a cached neighbor by one column, which is the
        # access pattern of greedy and of subset sweeps; otherwise fall
        # back to the canonical recursion that strips the largest id.
        ordered = sorted(ids)
        for a in ordered:
            base = self._cache.get(ids - {a})
            if base is not None:
                dist = self._convolve(base, self.columns[a].score_dist)
                self._cache_put(ids, dist)
                return dist
        last = ordered[-1]
        base = self._dist_of(ids - {last})
        dist = self._convolve(base, self.columns[last].score_dist)
        self._cache_put(ids, dist)
        return dist

    # -- objective values ---------------------------------------------------

    def f_of(self, ids: AbstractSet[ColumnId]):
        """Normalized objective 2 * auc*(A) - 1; zero on the empty set."""
        key = self._require_known(ids)
        with self._lock:
            self._eval_count += 1
            dist = self._dist_of(key)
        if not key:
            return Fraction(0) if self.exact else 0.0
        return score_dist.f_value_from_scores(dist)

    def auc_star(self, ids: AbstractSet[ColumnId]):
        """Best achievable AUC of the cross of the given columns."""
        f = self.f_of(ids)
        if self.exact:
            return Fraction(1, 2) + f / 2
        return 0.5 + f / 2.0

    def auc_star_with_bound(self, ids: AbstractSet[ColumnId]):
        """AUC plus the certified error bound left open by pruning."""
        key = self._require_known(ids)
        with self._lock:
            self._eval_count += 1
            dist = self._dist_of(key)
        return score_dist.auc_from_scores(dist), score_dist.auc_error_bound(dist)

    def auc_star_exact(self, ids: AbstractSet[ColumnId], *,
                       max_pairs: int = DEFAULT_ORACLE_PAIR_CAP):
        """Brute-force oracle: explicit product measures, pair enumeration.

        Exact mode only; independent of the convolution path.
        """
        if not self.exact:
            raise ValueError("the enumeration oracle requires exact-mode columns")
        key = self._require_known(ids)
        if not key:
            return Fraction(1, 2)
        cols = [self.columns[a] for a in sorted(key)]
        size = 1
        for col in cols:
            size *= len(col.pair.p1)
        if size * size > max_pairs:
            raise CapacityError(
                f"oracle would enumerate {size * size} outcome pairs, above the cap "
                f"of {max_pairs}")
        p1 = product_measure([c.pair.p1 for c in cols])
        p0 = product_measure([c.pair.p0 for c in cols])
        return Fraction(1, 2) + commutator_tv(p1, p0, max_outcomes=size) / 2


def objective_from_pairs(pairs: Sequence[tuple[ColumnId, ConditionalPair]],
                         **kwargs) -> NbObjective:
    """Convenience constructor from (column_id, ConditionalPair) tuples."""
    return NbObjective([ColumnModel.build(cid, pair) for cid, pair in pairs], **kwargs)
