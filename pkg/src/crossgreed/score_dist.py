"""Distributions of the log-likelihood-ratio score under both class laws.

Given a pair of conditional measures (P1, P0) on one feature column, each
outcome x carries the score log(P1(x)/P0(x)), an extended real: +inf when
P0(x) = 0 and -inf when P1(x) = 0.  Grouping outcomes by score value and
recording their mass under each conditional yields a
:class:`ScoreDistribution`.  Because conditionally independent columns add
their scores, the score law of a set of columns is the convolution of the
per-column laws -- the path that scales where explicit product
enumeration cannot.

Exact mode keys finite scores by the reduced rational ratio
P1(x)/P0(x) (equal ratios merge soundly); float mode keys them by the
log-ratio rounded onto a fixed 1e-9 grid, stored as int64 grid indices so
convolution adds keys exactly.  Float-mode convolutions may prune atoms
whose masses under both laws fall below ``prune_eps``; the discarded mass
is tracked so every AUC read-out carries a certified error bound.

The float-mode inner loops live in a compiled extension when available
(``CROSSGREED_PURE=1`` forces the NumPy fallback).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

import numpy as np

from . import _convkernel_py
from .errors import CapacityError, DomainMismatchError
from .measures import Measure

if os.environ.get("CROSSGREED_PURE"):
    _kernel = _convkernel_py
else:
    try:
        from . import _convkernel_c as _kernel  # type: ignore[no-redef]
    except ImportError:
        _kernel = _convkernel_py

#: Which convolution backend was selected at import time.
BACKEND = _kernel.NAME

#: Width of the float-mode score grid.
SCORE_GRID = 1e-9

#: Pairwise-product cap for a single convolution.
DEFAULT_ATOM_CAP = 2_000_000

_NEG, _FIN, _POS = -1, 0, 1
_POS_KEY = _convkernel_py.POS_KEY
_NEG_KEY = _convkernel_py.NEG_KEY


@total_ordering
@dataclass(frozen=True, slots=True)
class ExtendedScore:
    """A score in the extended reals, ordered NegInf < finite < PosInf.

    Exact finite scores carry the underlying mass ratio as a reduced
    rational and compare by cross-multiplication; float scores compare by
    log value.
    """

    kind: int  # _NEG, _FIN or _POS
    ratio: Fraction | None  # exact finite scores only
    log_value: float

    @classmethod
    def pos_inf(cls) -> "ExtendedScore":
        return cls(_POS, None, math.inf)

    @classmethod
    def neg_inf(cls) -> "ExtendedScore":
        return cls(_NEG, None, -math.inf)

    @classmethod
    def from_ratio(cls, ratio: Fraction) -> "ExtendedScore":
        if ratio <= 0:
            raise ValueError("finite scores need a strictly positive ratio")
        return cls(_FIN, ratio, math.log(ratio))

    @classmethod
    def from_log(cls, log_value: float) -> "ExtendedScore":
        if math.isinf(log_value):
            return cls.pos_inf() if log_value > 0 else cls.neg_inf()
        return cls(_FIN, None, log_value)

    @property
    def is_finite(self) -> bool:
        return self.kind == _FIN

    def _order_key(self):
        if self.kind != _FIN:
            return (self.kind, 0)
        return (self.kind, self.ratio if self.ratio is not None else self.log_value)

    def __lt__(self, other: "ExtendedScore") -> bool:
        return self._order_key() < other._order_key()

    def __repr__(self) -> str:
        if self.kind == _POS:
            return "ExtendedScore(+inf)"
        if self.kind == _NEG:
            return "ExtendedScore(-inf)"
        if self.ratio is not None:
            return f"ExtendedScore(log {self.ratio})"
        return f"ExtendedScore({self.log_value})"


@dataclass(frozen=True, slots=True)
class ScoreAtom:
    """One score value with its mass under each conditional law."""

    score: ExtendedScore
    w1: Fraction | float
    w0: Fraction | float


# Internal exact atom key: (kind, numerator, denominator) of the reduced
# ratio; (kind, 0, 0) for the infinite kinds.  Int tuples hash fast; real
# ratio ordering is applied once when atoms are frozen.
_EXACT_POS = (_POS, 0, 0)
_EXACT_NEG = (_NEG, 0, 0)


def _exact_sort_key(item):
    (kind, num, den), _ = item
    return (kind, Fraction(num, den) if kind == _FIN else Fraction(0))


class ScoreDistribution:
    """Sorted score atoms plus pruned-mass accounting (float mode)."""

    __slots__ = ("exact", "_exact_atoms", "_keys", "_w1", "_w0",
                 "pruned_mass_w1", "pruned_mass_w0")

    def __init__(self, *, exact_atoms=None, keys=None, w1=None, w0=None,
                 pruned_w1=0.0, pruned_w0=0.0):
        if exact_atoms is not None:
            object.__setattr__(self, "exact", True)
            object.__setattr__(self, "_exact_atoms", tuple(exact_atoms))
            object.__setattr__(self, "_keys", None)
            object.__setattr__(self, "_w1", None)
            object.__setattr__(self, "_w0", None)
            object.__setattr__(self, "pruned_mass_w1", Fraction(0))
            object.__setattr__(self, "pruned_mass_w0", Fraction(0))
        else:
            object.__setattr__(self, "exact", False)
            object.__setattr__(self, "_exact_atoms", None)
            object.__setattr__(self, "_keys", keys)
            object.__setattr__(self, "_w1", w1)
            object.__setattr__(self, "_w0", w0)
            object.__setattr__(self, "pruned_mass_w1", float(pruned_w1))
            object.__setattr__(self, "pruned_mass_w0", float(pruned_w0))

    def __setattr__(self, name, value):
        raise AttributeError("ScoreDistribution is immutable")

    def __len__(self) -> int:
        if self.exact:
            return len(self._exact_atoms)
        return len(self._keys)

    @property
    def atoms(self) -> tuple[ScoreAtom, ...]:
        if self.exact:
            out = []
            for (kind, num, den), w1, w0 in self._exact_atoms:
                if kind == _POS:
                    score = ExtendedScore.pos_inf()
                elif kind == _NEG:
                    score = ExtendedScore.neg_inf()
                else:
                    score = ExtendedScore.from_ratio(Fraction(num, den))
                out.append(ScoreAtom(score, w1, w0))
            return tuple(out)
        out = []
        for key, w1, w0 in zip(self._keys, self._w1, self._w0):
            if key >= _POS_KEY:
                score = ExtendedScore.pos_inf()
            elif key <= _NEG_KEY:
                score = ExtendedScore.neg_inf()
            else:
                score = ExtendedScore.from_log(int(key) * SCORE_GRID)
            out.append(ScoreAtom(score, float(w1), float(w0)))
        return tuple(out)

    @property
    def total_w1(self):
        if self.exact:
            return sum((w1 for _, w1, _ in self._exact_atoms), Fraction(0))
        return float(self._w1.sum()) if len(self._w1) else 0.0

    @property
    def total_w0(self):
        if self.exact:
            return sum((w0 for _, _, w0 in self._exact_atoms), Fraction(0))
        return float(self._w0.sum()) if len(self._w0) else 0.0

    def __repr__(self) -> str:
        mode = "exact" if self.exact else f"float[{BACKEND}]"
        return f"ScoreDistribution({mode}, {len(self)} atoms)"


def _freeze_exact(acc: dict) -> ScoreDistribution:
    atoms = [(key, w1, w0) for key, (w1, w0) in acc.items() if w1 != 0 or w0 != 0]
    atoms.sort(key=lambda a: (a[0][0], Fraction(a[0][1], a[0][2]) if a[0][0] == _FIN else 0))
    return ScoreDistribution(exact_atoms=atoms)


def _freeze_float(acc: dict, pruned_w1=0.0, pruned_w0=0.0) -> ScoreDistribution:
    items = sorted((k, v) for k, v in acc.items() if v[0] > 0.0 or v[1] > 0.0)
    keys = np.array([k for k, _ in items], dtype=np.int64)
    w1 = np.array([v[0] for _, v in items], dtype=np.float64)
    w0 = np.array([v[1] for _, v in items], dtype=np.float64)
    return ScoreDistribution(keys=keys, w1=w1, w0=w0,
                             pruned_w1=pruned_w1, pruned_w0=pruned_w0)


def _float_key(log_ratio: float) -> int:
    if math.isinf(log_ratio):
        return _POS_KEY if log_ratio > 0 else _NEG_KEY
    return int(round(log_ratio / SCORE_GRID))


def identity_distribution(exact: bool = True) -> ScoreDistribution:
    """The convolution identity: all mass at score zero under both laws."""
    if exact:
        return ScoreDistribution(exact_atoms=[((_FIN, 1, 1), Fraction(1), Fraction(1))])
    return ScoreDistribution(keys=np.array([0], dtype=np.int64),
                             w1=np.array([1.0]), w0=np.array([1.0]))


def from_conditional_pair(p1: Measure, p0: Measure) -> ScoreDistribution:
    """Score law of a single column from its two conditional measures.

    Outcomes with the same ratio P1(x)/P0(x) merge into one atom;
    outcomes with zero mass under both conditionals are skipped.
    """
    if p1.outcome_set() != p0.outcome_set():
        raise DomainMismatchError("conditional measures need a common outcome set")
    if p1.exact != p0.exact:
        raise DomainMismatchError("conditional measures must share an arithmetic mode")

    if p1.exact:
        acc: dict = {}
        for x, m1 in p1.items():
            m0 = p0.mass(x)
            if m1 == 0 and m0 == 0:
                continue
            if m0 == 0:
                key = _EXACT_POS
            elif m1 == 0:
                key = _EXACT_NEG
            else:
                ratio = m1 / m0
                key = (_FIN, ratio.numerator, ratio.denominator)
            slot = acc.setdefault(key, [Fraction(0), Fraction(0)])
            slot[0] += m1
            slot[1] += m0
        return _freeze_exact(acc)

    acc = {}
    for x, m1 in p1.items():
        m0 = float(p0.mass(x))
        m1 = float(m1)
        if m1 == 0.0 and m0 == 0.0:
            continue
        if m0 == 0.0:
            key = _POS_KEY
        elif m1 == 0.0:
            key = _NEG_KEY
        else:
            key = _float_key(math.log(m1 / m0))
        slot = acc.setdefault(key, [0.0, 0.0])
        slot[0] += m1
        slot[1] += m0
    return _freeze_float(acc)


def _add_exact_keys(ka, kb):
    # Extended-real addition on (kind, num, den) keys.  Scores add, so
    # finite ratios multiply.  The opposite-infinity case is pinned to
    # score zero: its atom always has zero mass under both laws and is
    # dropped by the zero filter.
    kind_a, kind_b = ka[0], kb[0]
    if kind_a == _FIN and kind_b == _FIN:
        ratio = Fraction(ka[1] * kb[1], ka[2] * kb[2])
        return (_FIN, ratio.numerator, ratio.denominator)
    if kind_a == _FIN:
        return kb
    if kind_b == _FIN:
        return ka
    if kind_a == kind_b:
        return ka
    return (_FIN, 1, 1)


def convolve(a: ScoreDistribution, b: ScoreDistribution, *,
             prune_eps: float = 0.0,
             max_atoms: int = DEFAULT_ATOM_CAP) -> ScoreDistribution:
    """Score law of the sum of two independent scores.

    Emits one atom per pair with masses multiplied under each law,
    merging equal score keys.  ``prune_eps > 0`` (float mode only) drops
    atoms whose both masses fall below the threshold and accounts for
    the discarded mass in the pruned accumulators.
    """
    if a.exact != b.exact:
        raise DomainMismatchError("cannot convolve exact with float distributions")
    if len(a) * len(b) > max_atoms:
        raise CapacityError(
            f"convolution would enumerate {len(a) * len(b)} atom pairs, above the cap "
            f"of {max_atoms}; raise the cap or enable pruning")

    if a.exact:
        if prune_eps:
            raise ValueError("pruning applies to float mode only")
        acc: dict = {}
        for ka, w1a, w0a in a._exact_atoms:
            for kb, w1b, w0b in b._exact_atoms:
                w1 = w1a * w1b
                w0 = w0a * w0b
                if w1 == 0 and w0 == 0:
                    continue
                key = _add_exact_keys(ka, kb)
                slot = acc.setdefault(key, [Fraction(0), Fraction(0)])
                slot[0] += w1
                slot[1] += w0
        return _freeze_exact(acc)

    keys, w1, w0, new_p1, new_p0 = _kernel.convolve_pairs(
        a._keys, a._w1, a._w0, b._keys, b._w1, b._w0, prune_eps)
    # Compose missing-mass accounting: with pa = a.pruned and pb = b.pruned,
    # the kept pair mass is (1-pa)(1-pb) minus what this step pruned.
    pa1, pb1 = a.pruned_mass_w1, b.pruned_mass_w1
    pa0, pb0 = a.pruned_mass_w0, b.pruned_mass_w0
    pruned_w1 = pa1 + pb1 - pa1 * pb1 + new_p1
    pruned_w0 = pa0 + pb0 - pa0 * pb0 + new_p0
    return ScoreDistribution(keys=keys, w1=w1, w0=w0,
                             pruned_w1=pruned_w1, pruned_w0=pruned_w0)


def auc_from_scores(d: ScoreDistribution):
    """Probability that a positive sample outscores a negative one.

    One ascending pass with prefix sums:
    ``sum_{s>t} w1(s) w0(t) + 0.5 sum_s w1(s) w0(s)``.  With pruning
    active this is a lower end of the certified interval; see
    :func:`auc_error_bound`.
    """
    if d.exact:
        auc = Fraction(0)
        below = Fraction(0)
        for _, w1, w0 in d._exact_atoms:
            auc += w1 * below + Fraction(1, 2) * w1 * w0
            below += w0
        return auc
    value = _kernel.auc_sorted(d._w1, d._w0)
    return min(max(value, 0.0), 1.0)


def auc_error_bound(d: ScoreDistribution):
    """Certified half-width of the AUC interval left open by pruning."""
    if d.exact:
        return Fraction(0)
    return d.pruned_mass_w1 + d.pruned_mass_w0


def f_value_from_scores(d: ScoreDistribution):
    """The normalized objective 2 * auc - 1 read off a score law."""
    return 2 * auc_from_scores(d) - 1
