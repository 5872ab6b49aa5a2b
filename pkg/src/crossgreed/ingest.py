"""Dataset loading and frequency estimation.

Reads delimited text with a header row and a binary label column, builds
per-column vocabularies in first-occurrence order, and turns the integer
counts into the conditional measures consumed by the factorized objective
or into a joint table for ground-truth evaluation.

With ``smoothing_alpha = 0`` (the default) every probability is an exact
ratio of counts; additive smoothing is an opt-in practical knob that
perturbs the conditional-independence structure the greedy guarantee
relies on, so it is off unless requested.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import AbstractSet, Sequence

from .errors import CapacityError, DatasetError, DegenerateLabelError
from .joint_eval import JointTable
from .measures import Measure
from .nb_model import ConditionalPair

_LABEL_VALUES = {"0": 0, "false": 0, "1": 1, "true": 1}

#: Default cap on |V_A| when materializing a joint table.
DEFAULT_JOINT_TUPLE_CAP = 1_000_000


@dataclass(frozen=True)
class DatasetSpec:
    """Where and how to read one labeled dataset."""

    path: str | Path
    label_column: str
    delimiter: str = ","
    feature_columns: tuple[str, ...] | None = None
    smoothing_alpha: Fraction | float = 0

    def __post_init__(self):
        if len(self.delimiter) != 1:
            raise DatasetError("delimiter must be a single character")
        if self.smoothing_alpha < 0:
            raise DatasetError("smoothing_alpha must be nonnegative")
        if self.feature_columns is not None:
            object.__setattr__(self, "feature_columns", tuple(self.feature_columns))


@dataclass
class ColumnStats:
    """Vocabulary and per-label counts of one feature column."""

    name: str
    vocabulary: dict[str, int] = field(default_factory=dict)
    counts_by_label: tuple[list[int], list[int]] = field(
        default_factory=lambda: ([], []))
    n0: int = 0
    n1: int = 0

    def token_id(self, value: str) -> int:
        tid = self.vocabulary.get(value)
        if tid is None:
            tid = len(self.vocabulary)
            self.vocabulary[value] = tid
            self.counts_by_label[0].append(0)
            self.counts_by_label[1].append(0)
        return tid

    def observe(self, value: str, label: int) -> None:
        tid = self.token_id(value)
        self.counts_by_label[label][tid] += 1
        if label == 0:
            self.n0 += 1
        else:
            self.n1 += 1

    @property
    def vocab_size(self) -> int:
        return len(self.vocabulary)


def _parse_label(raw: str, lineno: int) -> int:
    label = _LABEL_VALUES.get(raw.strip().lower())
    if label is None:
        raise DatasetError(
            f"line {lineno}: label value {raw!r} is not one of 0/1/true/false")
    return label


def _open_rows(spec: DatasetSpec):
    path = Path(spec.path)
    if not path.exists():
        raise DatasetError(f"dataset file not found: {path}")
    return path.open("r", encoding="utf-8", newline="")


def _read_header(reader, spec: DatasetSpec) -> tuple[list[str], list[int], int]:
    try:
        header = next(reader)
    except StopIteration:
        raise DatasetError("dataset file is empty (no header row)") from None
    if spec.label_column not in header:
        raise DatasetError(
            f"label column {spec.label_column!r} not found in header {header}")
    label_pos = header.index(spec.label_column)
    if spec.feature_columns is None:
        feature_names = [name for name in header if name != spec.label_column]
    else:
        missing = [c for c in spec.feature_columns if c not in header]
        if missing:
            raise DatasetError(f"feature columns not in header: {missing}")
        if spec.label_column in spec.feature_columns:
            raise DatasetError("label column cannot be a feature column")
        feature_names = list(spec.feature_columns)
    positions = [header.index(name) for name in feature_names]
    return feature_names, positions, label_pos


def load_dataset(spec: DatasetSpec) -> tuple[list[ColumnStats], int]:
    """Single streaming pass: per-column vocabularies and label counts.

    Token ids follow first occurrence in file order.  Both label classes
    must be populated.
    """
    with _open_rows(spec) as handle:
        reader = csv.reader(handle, delimiter=spec.delimiter)
        feature_names, positions, label_pos = _read_header(reader, spec)
        width = max([label_pos] + positions) + 1
        stats = [ColumnStats(name) for name in feature_names]
        rows = 0
        label_counts = [0, 0]
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) < width:
                raise DatasetError(
                    f"line {lineno}: expected at least {width} fields, got {len(row)}")
            label = _parse_label(row[label_pos], lineno)
            label_counts[label] += 1
            for stat, pos in zip(stats, positions):
                stat.observe(row[pos], label)
            rows += 1
    if rows == 0:
        raise DatasetError("dataset has a header but no data rows")
    if label_counts[0] == 0 or label_counts[1] == 0:
        raise DegenerateLabelError(
            f"both label classes need rows, got {label_counts[0]} zeros "
            f"and {label_counts[1]} ones")
    return stats, rows


def build_conditionals(stats: ColumnStats, alpha: Fraction | float = 0, *,
                       exact: bool = True) -> ConditionalPair:
    """Additively smoothed conditional laws P_i(v) = (c_i(v) + a) / (n_i + a|V|).

    ``alpha = 0`` reproduces the empirical frequencies exactly; values
    unseen under one label then get probability zero, which downstream
    becomes an infinite score atom rather than being clipped.
    """
    if stats.n0 <= 0 or stats.n1 <= 0:
        raise DegenerateLabelError(
            f"column {stats.name!r} needs rows under both labels "
            f"(n0={stats.n0}, n1={stats.n1})")
    size = stats.vocab_size
    outcomes = list(range(size))

    def law(counts: Sequence[int], n: int) -> Measure:
        if exact:
            a = Fraction(alpha)
            denom = n + a * size
            return Measure(outcomes, [(c + a) / denom for c in counts])
        a = float(alpha)
        denom = n + a * size
        return Measure(outcomes, [(c + a) / denom for c in counts])

    return ConditionalPair(p0=law(stats.counts_by_label[0], stats.n0),
                           p1=law(stats.counts_by_label[1], stats.n1))


def load_objective_columns(spec: DatasetSpec, *, exact: bool = True):
    """Load a dataset and build one (name, ConditionalPair) per column."""
    stats, rows = load_dataset(spec)
    pairs = [(stat.name, build_conditionals(stat, spec.smoothing_alpha, exact=exact))
             for stat in stats]
    return pairs, stats, rows


def build_joint_table(spec: DatasetSpec, ids: AbstractSet[str], *,
                      exact: bool = True,
                      max_tuples: int = DEFAULT_JOINT_TUPLE_CAP) -> JointTable:
    """Empirical joint law of the selected columns and the label.

    Row masses are exact frequencies with the row count as denominator.
    Values are tokenized with the same first-occurrence rule as
    :func:`load_dataset`, so single-column marginals agree exactly with
    :func:`build_conditionals` at ``alpha = 0``.
    """
    wanted = sorted(ids)
    with _open_rows(spec) as handle:
        reader = csv.reader(handle, delimiter=spec.delimiter)
        feature_names, positions, label_pos = _read_header(reader, spec)
        name_pos = dict(zip(feature_names, positions))
        missing = [c for c in wanted if c not in name_pos]
        if missing:
            raise DatasetError(f"columns not in dataset: {missing}")
        sel_positions = [name_pos[c] for c in wanted]
        width = max([label_pos] + sel_positions, default=label_pos) + 1

        stats = {c: ColumnStats(c) for c in wanted}
        counts: dict[tuple, int] = {}
        rows = 0
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) < width:
                raise DatasetError(
                    f"line {lineno}: expected at least {width} fields, got {len(row)}")
            label = _parse_label(row[label_pos], lineno)
            values = tuple(stats[c].token_id(row[pos])
                           for c, pos in zip(wanted, sel_positions))
            counts[(values, label)] = counts.get((values, label), 0) + 1
            rows += 1
    if rows == 0:
        raise DatasetError("dataset has a header but no data rows")

    n_tuples = 1
    for c in wanted:
        n_tuples *= max(1, stats[c].vocab_size)
    if n_tuples > max_tuples:
        raise CapacityError(
            f"joint table over {n_tuples} value tuples exceeds the cap of {max_tuples}")

    columns = [(c, tuple(range(stats[c].vocab_size))) for c in wanted]
    if exact:
        table_rows = {cell: Fraction(c, rows) for cell, c in counts.items()}
    else:
        table_rows = {cell: c / rows for cell, c in counts.items()}
    return JointTable(columns, table_rows)
