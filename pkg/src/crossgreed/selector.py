"""Cardinality-constrained maximizers of a monotone set function.

All three methods take an abstract objective handle ``f(subset) -> value``
so they work against the factorized objective, a joint-table objective
(no approximation guarantee there), or any test double.  Values may be
exact rationals or floats; only comparisons are used.

Determinism contract: ties break on the smallest column id everywhere,
so identical inputs produce identical reports.  On a submodular
objective, lazy greedy selects exactly what plain greedy selects while
evaluating the objective no more often.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable

from .errors import CapacityError

ColumnId = Hashable
Objective = Callable[[frozenset], object]

#: Default cap on C(|U|, k) for exhaustive search.
DEFAULT_EXHAUSTIVE_CAP = 1_000_000

#: Slack when deciding that a refreshed gain exceeds its stale bound.
STALE_FLOAT_SLACK = 1e-12


@dataclass(frozen=True, slots=True)
class SearchReport:
    """Outcome of one search run.

    ``gains`` and ``f_trajectory`` are per-step for the greedy methods;
    exhaustive search reports the final value only.
    ``stale_bound_violations`` counts refreshed marginal gains that
    exceeded their cached upper bound -- always zero on a submodular
    objective, a diagnostic otherwise.
    """

    method: str
    selected: tuple[ColumnId, ...]
    gains: tuple
    f_trajectory: tuple
    evaluations: int
    stale_bound_violations: int = 0

    @property
    def f_value(self):
        return self.f_trajectory[-1] if self.f_trajectory else None


class _CountingObjective:
    def __init__(self, objective: Objective):
        self._objective = objective
        self.calls = 0

    def __call__(self, subset: frozenset):
        self.calls += 1
        return self._objective(subset)


def _norm_universe(universe: Iterable[ColumnId]) -> list[ColumnId]:
    ordered = sorted(set(universe))
    return ordered


def greedy_select(objective: Objective, universe: Iterable[ColumnId], k: int, *,
                  pad_to_k: bool = False) -> SearchReport:
    """Plain greedy: add the argmax marginal gain for k steps.

    Stops early once the best marginal gain is nonpositive unless
    ``pad_to_k`` forces a full-size selection (gains of zero lose
    nothing on a monotone submodular objective).
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    f = _CountingObjective(objective)
    remaining = _norm_universe(universe)
    budget = min(k, len(remaining))

    selected: list[ColumnId] = []
    gains: list = []
    trajectory: list = []
    current = f(frozenset())

    while len(selected) < budget:
        base = frozenset(selected)
        best_id = None
        best_value = None
        best_gain = None
        for cand in remaining:  # ascending ids: first strict max wins ties
            value = f(base | {cand})
            gain = value - current
            if best_gain is None or gain > best_gain:
                best_id, best_value, best_gain = cand, value, gain
        if best_gain <= 0 and not pad_to_k:
            break
        selected.append(best_id)
        remaining.remove(best_id)
        gains.append(best_gain)
        trajectory.append(best_value)
        current = best_value

    return SearchReport(
        method="greedy",
        selected=tuple(selected),
        gains=tuple(gains),
        f_trajectory=tuple(trajectory),
        evaluations=f.calls,
    )


def lazy_greedy_select(objective: Objective, universe: Iterable[ColumnId], k: int, *,
                       pad_to_k: bool = False) -> SearchReport:
    """Accelerated greedy using stale gains as upper bounds.

    Under submodularity a cached gain can only shrink, so a refreshed
    candidate that still tops the heap is the true argmax.  The heap
    orders by (-gain, id): among equal gains the smallest id surfaces
    first, matching :func:`greedy_select` exactly.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    f = _CountingObjective(objective)
    ordered = _norm_universe(universe)
    budget = min(k, len(ordered))

    selected: list[ColumnId] = []
    gains: list = []
    trajectory: list = []
    violations = 0
    current = f(frozenset())

    heap = []
    for cand in ordered:
        value = f(frozenset({cand}))
        heap.append((_NegKey(value - current), cand, 0, value))
    heapq.heapify(heap)

    while heap and len(selected) < budget:
        neg_gain, cand, stamp, value = heapq.heappop(heap)
        stale_gain = neg_gain.value
        if stamp != len(selected):
            value = f(frozenset(selected) | {cand})
            fresh_gain = value - current
            if _exceeds(fresh_gain, stale_gain):
                violations += 1
            heapq.heappush(heap, (_NegKey(fresh_gain), cand, len(selected), value))
            continue
        if stale_gain <= 0 and not pad_to_k:
            break
        selected.append(cand)
        gains.append(stale_gain)
        trajectory.append(value)
        current = value

    return SearchReport(
        method="lazy_greedy",
        selected=tuple(selected),
        gains=tuple(gains),
        f_trajectory=tuple(trajectory),
        evaluations=f.calls,
        stale_bound_violations=violations,
    )


def exhaustive_select(objective: Objective, universe: Iterable[ColumnId], k: int, *,
                      max_candidates: int = DEFAULT_EXHAUSTIVE_CAP) -> SearchReport:
    """Global optimum over all subsets of size min(k, |U|).

    Candidates are generated in lexicographic order and only strict
    improvements are kept, so ties resolve to the lexicographically
    smallest optimal set.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    ordered = _norm_universe(universe)
    size = min(k, len(ordered))
    n_candidates = _n_choose_k(len(ordered), size)
    if n_candidates > max_candidates:
        raise CapacityError(
            f"exhaustive search over {n_candidates} candidate sets exceeds the cap "
            f"of {max_candidates}")

    f = _CountingObjective(objective)
    best_set: tuple[ColumnId, ...] = ()
    best_value = None
    for combo in itertools.combinations(ordered, size):
        value = f(frozenset(combo))
        if best_value is None or value > best_value:
            best_set, best_value = combo, value

    return SearchReport(
        method="exhaustive",
        selected=best_set,
        gains=(),
        f_trajectory=(best_value,) if best_value is not None else (),
        evaluations=f.calls,
    )


def _n_choose_k(n: int, k: int) -> int:
    import math
    return math.comb(n, k)


def _exceeds(fresh, stale) -> bool:
    if isinstance(fresh, float) or isinstance(stale, float):
        return float(fresh) > float(stale) + STALE_FLOAT_SLACK
    return fresh > stale


class _NegKey:
    """Descending-order wrapper so gains sort max-first in a min-heap."""

    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value

    def __lt__(self, other: "_NegKey") -> bool:
        return other.value < self.value

    def __eq__(self, other) -> bool:
        return isinstance(other, _NegKey) and self.value == other.value
