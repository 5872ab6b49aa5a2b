"""Exact evaluation on an arbitrary joint distribution of features and label.

No independence assumption: a :class:`JointTable` stores the full joint
law of (X_A, C) sparsely (only nonzero-mass rows) and every quantity --
conditional measures, best-achievable AUC, mutual information, the AUC of
an arbitrary scorer -- is computed by explicit enumeration.  This is the
ground truth against which the factorized objective and the hardness
constructions are checked, and the cost is inherently exponential in |A|;
the caps are the contract.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import AbstractSet, Callable, Hashable, Mapping, Sequence

from .errors import CapacityError, DatasetError
from .measures import Measure, commutator_tv

ColumnId = Hashable

#: Default cap on enumerated outcome pairs for the quadratic passes.
DEFAULT_PAIR_CAP = 10_000_000

#: Default cap on |V_A| for full-product enumerations (independence gap).
DEFAULT_PRODUCT_CAP = 1_000_000


class JointTable:
    """Sparse joint distribution over feature tuples and a binary label."""

    def __init__(self, columns: Sequence[tuple[ColumnId, Sequence]],
                 rows: Mapping[tuple, Fraction | float]):
        self.columns = tuple((cid, tuple(vocab)) for cid, vocab in columns)
        self.column_ids = tuple(cid for cid, _ in self.columns)
        if len(set(self.column_ids)) != len(self.column_ids):
            raise ValueError("column ids must be unique")
        self._pos = {cid: i for i, cid in enumerate(self.column_ids)}
        vocab_sets = {cid: set(vocab) for cid, vocab in self.columns}

        clean: dict[tuple, Fraction | float] = {}
        exact = True
        for (values, label), mass in rows.items():
            if label not in (0, 1):
                raise ValueError(f"label must be 0 or 1, got {label!r}")
            values = tuple(values)
            if len(values) != len(self.column_ids):
                raise ValueError("row arity does not match the column count")
            for cid, v in zip(self.column_ids, values):
                if v not in vocab_sets[cid]:
                    raise ValueError(f"value {v!r} not in the vocabulary of column {cid!r}")
            if mass < 0:
                raise ValueError("row masses must be nonnegative")
            if not isinstance(mass, (Fraction, int)):
                exact = False
            if mass == 0:
                continue
            key = (values, label)
            if key in clean:
                raise ValueError(f"duplicate row {key!r}")
            clean[key] = mass

        self.exact = exact
        if exact:
            self.rows = {k: Fraction(v) for k, v in clean.items()}
            total = sum(self.rows.values(), Fraction(0))
            if total != 1:
                raise ValueError(f"row masses must sum to 1, got {total}")
        else:
            self.rows = {k: float(v) for k, v in clean.items()}
            total = math.fsum(self.rows.values())
            if abs(total - 1.0) > 1e-12:
                raise ValueError(f"row masses must sum to 1, got {total}")

        zero = Fraction(0) if exact else 0.0
        marg = [zero, zero]
        for (_, label), mass in self.rows.items():
            marg[label] = marg[label] + mass
        self.label_marginals = tuple(marg)

    def label_marginal(self, label: int):
        return self.label_marginals[label]

    def _select(self, ids: AbstractSet[ColumnId]) -> list[int]:
        unknown = set(ids) - set(self.column_ids)
        if unknown:
            raise KeyError(f"unknown column ids: {sorted(unknown, key=repr)}")
        return [self._pos[cid] for cid in sorted(ids)]

    def project(self, ids: AbstractSet[ColumnId]) -> dict:
        """Masses of (x_A, label) pairs, x_A in sorted-column order."""
        positions = self._select(ids)
        zero = Fraction(0) if self.exact else 0.0
        out: dict = {}
        for (values, label), mass in self.rows.items():
            key = (tuple(values[i] for i in positions), label)
            out[key] = out.get(key, zero) + mass
        return out

    def __repr__(self) -> str:
        mode = "exact" if self.exact else "float"
        return (f"JointTable({mode}, {len(self.column_ids)} columns, "
                f"{len(self.rows)} rows)")


def conditional_measure(table: JointTable, ids: AbstractSet[ColumnId],
                        label: int) -> Measure:
    """The law of X_A given C = label, on the union support of both labels.

    Outcomes of zero joint mass under both labels carry no information
    for any downstream quantity, so the outcome set is the set of value
    tuples observed under either label (deterministically ordered).
    """
    if label not in (0, 1):
        raise ValueError("label must be 0 or 1")
    denom = table.label_marginal(label)
    if denom == 0:
        raise DatasetError(f"cannot condition on label {label}: zero marginal")
    projected = table.project(ids)
    support = sorted({values for values, _ in projected}, key=repr)
    zero = Fraction(0) if table.exact else 0.0
    masses = [projected.get((values, label), zero) / denom for values in support]
    return Measure(support, masses)


def auc_star_joint(table: JointTable, ids: AbstractSet[ColumnId], *,
                   max_pairs: int = DEFAULT_PAIR_CAP):
    """Best achievable AUC on the joint law, by pair enumeration."""
    p1 = conditional_measure(table, ids, 1)
    p0 = conditional_measure(table, ids, 0)
    n = len(p1)
    if n * n > max_pairs:
        raise CapacityError(
            f"joint evaluation would enumerate {n * n} pairs, above the cap of {max_pairs}")
    half = Fraction(1, 2) if table.exact else 0.5
    return half + commutator_tv(p1, p0, max_outcomes=n) / 2


def _log2_exact_or_float(ratio: Fraction):
    """log2 of a positive rational: an int when the ratio is a power of two."""
    num, den = ratio.numerator, ratio.denominator
    if num & (num - 1) == 0 and den & (den - 1) == 0:
        return num.bit_length() - den.bit_length()
    return math.log2(num / den)


def mutual_information(table: JointTable, ids: AbstractSet[ColumnId], *,
                       max_pairs: int = DEFAULT_PAIR_CAP):
    """Mutual information between X_A and the label, in bits.

    For exact tables whose pointwise ratios p(x,c) / (p(x) p(c)) are all
    powers of two (the hardness constructions), the result is an exact
    rational; otherwise it is a float.  Terms with p(x,c) = 0 contribute
    zero.
    """
    projected = table.project(ids)
    if len(projected) > max_pairs:
        raise CapacityError(
            f"{len(projected)} joint cells exceed the cap of {max_pairs}")
    zero = Fraction(0) if table.exact else 0.0
    feature_marginal: dict = {}
    for (values, _), mass in projected.items():
        feature_marginal[values] = feature_marginal.get(values, zero) + mass

    if table.exact:
        exact_total = Fraction(0)
        float_terms: list[float] = []
        all_exact = True
        for (values, label), mass in projected.items():
            if mass == 0:
                continue
            ratio = mass / (feature_marginal[values] * table.label_marginal(label))
            log2 = _log2_exact_or_float(ratio)
            if isinstance(log2, int):
                exact_total += mass * log2
            else:
                all_exact = False
                float_terms.append(float(mass) * log2)
        if all_exact:
            return exact_total
        return float(exact_total) + math.fsum(float_terms)

    terms = []
    for (values, label), mass in projected.items():
        if mass == 0.0:
            continue
        ratio = mass / (feature_marginal[values] * table.label_marginal(label))
        terms.append(mass * math.log2(ratio))
    return math.fsum(terms)


def auc_of_scorer(table: JointTable, ids: AbstractSet[ColumnId],
                  sigma: Mapping[tuple, object] | Callable[[tuple], object], *,
                  max_pairs: int = DEFAULT_PAIR_CAP):
    """AUC of an arbitrary scorer: P[s+ > s-] + (1/2) P[s+ = s-].

    ``sigma`` maps value tuples (sorted-column order) to extended reals;
    only the induced order matters.  Must be defined on every outcome of
    positive mass under either label.
    """
    p1 = conditional_measure(table, ids, 1)
    p0 = conditional_measure(table, ids, 0)
    n = len(p1)
    if n * n > max_pairs:
        raise CapacityError(
            f"scorer evaluation would enumerate {n * n} pairs, above the cap of {max_pairs}")

    if callable(sigma):
        lookup = sigma
    else:
        def lookup(values, _m=sigma):
            try:
                return _m[values]
            except KeyError:
                raise KeyError(f"scorer is missing a value for outcome {values!r}") from None

    outcomes = p1.outcomes
    scores = [lookup(x) for x in outcomes]
    exact = table.exact
    total = Fraction(0) if exact else 0.0
    half = Fraction(1, 2) if exact else 0.5
    for i, x in enumerate(outcomes):
        w1 = p1.mass(x)
        if w1 == 0:
            continue
        si = scores[i]
        for j, y in enumerate(outcomes):
            w0 = p0.mass(y)
            if w0 == 0:
                continue
            sj = scores[j]
            if si > sj:
                total += w1 * w0
            elif si == sj:
                total += half * w1 * w0
    return total


def independence_gap(table: JointTable, ids: AbstractSet[ColumnId], *,
                     max_tuples: int = DEFAULT_PRODUCT_CAP):
    """Worst-case gap between the joint conditionals and their factorization.

    Returns ``max over labels i and full-product tuples x of
    |Pr[X_A = x | C=i] - prod_a Pr[X_a = x_a | C=i]|``; zero iff the
    selected columns are conditionally independent given the label on A.
    """
    ordered = sorted(ids)
    if not ordered:
        return Fraction(0) if table.exact else 0.0
    vocab = {cid: voc for cid, voc in table.columns}
    n_tuples = 1
    for cid in ordered:
        n_tuples *= len(vocab[cid])
    if n_tuples > max_tuples:
        raise CapacityError(
            f"independence check would enumerate {n_tuples} tuples, above the cap "
            f"of {max_tuples}")

    zero = Fraction(0) if table.exact else 0.0
    worst = zero
    for label in (0, 1):
        joint = conditional_measure(table, ids, label)
        joint_mass = dict(joint.items())
        singles = {cid: conditional_measure(table, {cid}, label) for cid in ordered}
        single_mass = {
            cid: {values[0]: m for values, m in singles[cid].items()}
            for cid in ordered
        }
        for combo in itertools.product(*(vocab[cid] for cid in ordered)):
            prod = Fraction(1) if table.exact else 1.0
            for cid, v in zip(ordered, combo):
                prod *= single_mass[cid].get(v, zero)
            gap = abs(joint_mass.get(combo, zero) - prod)
            if gap > worst:
                worst = gap
    return worst


def from_factorized(pairs: Sequence[tuple[ColumnId, "object"]],
                    label_marginal_1: Fraction | float,
                    *, max_rows: int = DEFAULT_PRODUCT_CAP) -> JointTable:
    """Materialize the exact joint table of a conditionally-independent model.

    ``pairs`` holds (column_id, ConditionalPair)-like objects exposing
    ``p0`` and ``p1`` measures.  Useful as the bridge from the factorized
    objective to ground-truth evaluation.
    """
    ordered = sorted(pairs, key=lambda item: item[0])
    ids = [cid for cid, _ in ordered]
    exact = all(pair.p0.exact for _, pair in ordered)
    pr1 = Fraction(label_marginal_1) if exact else float(label_marginal_1)
    one = Fraction(1) if exact else 1.0
    if not 0 < pr1 < 1:
        raise ValueError("label marginal must lie strictly between 0 and 1")

    n_rows = 1
    for _, pair in ordered:
        n_rows *= len(pair.p1)
    if n_rows * 2 > max_rows:
        raise CapacityError(f"{n_rows * 2} rows exceed the cap of {max_rows}")

    columns = [(cid, pair.p1.outcomes) for cid, pair in ordered]
    rows: dict = {}
    for combo in itertools.product(*(pair.p1.outcomes for _, pair in ordered)):
        m1 = pr1
        m0 = one - pr1
        for (_, pair), v in zip(ordered, combo):
            m1 *= pair.p1.mass(v)
            m0 *= pair.p0.mass(v)
        if m1 != 0:
            rows[(combo, 1)] = m1
        if m0 != 0:
            rows[(combo, 0)] = m0
    return JointTable(columns, rows)
