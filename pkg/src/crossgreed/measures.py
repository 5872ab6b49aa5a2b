"""Finite discrete probability measures with dual arithmetic modes.

A :class:`Measure` stores one probability per outcome either as exact
rationals (``fractions.Fraction``) or as IEEE floats.  Exact mode is the
reference arithmetic: empirical frequencies are ratios of integer counts,
so every downstream quantity (total variation, AUC, marginal gains) admits
an exact value.  Float mode serves large instances.

The module also provides the two total-variation primitives the rest of
the package is built on:

* :func:`tv_distance` -- half the L1 distance between two measures on a
  common outcome set.
* :func:`commutator_tv` -- the total variation of the signed measure
  ``p x q - q x p``, evaluated by explicit pair enumeration.  This is the
  brute-force path; large instances go through ``score_dist`` instead.

Involutions (self-inverse relabelings) and the swap-sum identity they
induce are used by the verification suites in ``theory_lab``.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Callable, Hashable, Iterator, Mapping, Sequence

from .errors import CapacityError, DomainMismatchError

Outcome = Hashable
Mass = Fraction | float

#: Float-mode tolerance for "masses sum to one" and equivalence checks.
FLOAT_MASS_TOL = 1e-12

#: Float-mode tolerance for the swap-sum identity.
SWAP_SUM_TOL = 1e-10

#: Default cap on |V| for the |V|^2 commutator enumeration.
COMMUTATOR_OUTCOME_CAP = 4096


def _as_exact(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


class Measure:
    """An immutable probability measure on a finite outcome set.

    Outcomes are opaque hashable tokens; callers own any vocabulary
    mapping.  All masses must be Fractions/ints (exact mode) or floats
    (float mode); the two kinds cannot be mixed within one measure.
    """

    __slots__ = ("outcomes", "masses", "exact", "_index")

    def __init__(self, outcomes: Sequence[Outcome], masses: Sequence[Mass]):
        outcomes = tuple(outcomes)
        if len(set(outcomes)) != len(outcomes):
            raise ValueError("outcome identifiers must be unique")
        if len(masses) != len(outcomes):
            raise ValueError("need exactly one mass per outcome")
        if not outcomes:
            raise ValueError("a measure needs at least one outcome")

        exact = all(isinstance(m, (Fraction, int)) for m in masses)
        if exact:
            vals = tuple(_as_exact(m) for m in masses)
            if any(v < 0 for v in vals):
                raise ValueError("masses must be nonnegative")
            if sum(vals) != 1:
                raise ValueError(f"exact masses must sum to 1, got {sum(vals)}")
        else:
            vals = tuple(float(m) for m in masses)
            if any(v < 0 for v in vals):
                raise ValueError("masses must be nonnegative")
            total = math.fsum(vals)
            if abs(total - 1.0) > FLOAT_MASS_TOL:
                raise ValueError(f"float masses must sum to 1 within {FLOAT_MASS_TOL}, got {total}")

        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "masses", vals)
        object.__setattr__(self, "exact", exact)
        object.__setattr__(self, "_index", {x: i for i, x in enumerate(outcomes)})

    def __setattr__(self, name, value):
        raise AttributeError("Measure is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_mapping(cls, mapping: Mapping[Outcome, Mass]) -> "Measure":
        items = list(mapping.items())
        return cls([x for x, _ in items], [m for _, m in items])

    @classmethod
    def uniform(cls, outcomes: Sequence[Outcome], exact: bool = True) -> "Measure":
        n = len(tuple(outcomes))
        mass: Mass = Fraction(1, n) if exact else 1.0 / n
        return cls(outcomes, [mass] * n)

    @classmethod
    def point(cls, outcome: Outcome, outcomes: Sequence[Outcome], exact: bool = True) -> "Measure":
        one: Mass = Fraction(1) if exact else 1.0
        zero: Mass = Fraction(0) if exact else 0.0
        return cls(outcomes, [one if x == outcome else zero for x in outcomes])

    @classmethod
    def from_counts(cls, outcomes: Sequence[Outcome], counts: Sequence[int],
                    exact: bool = True) -> "Measure":
        total = sum(counts)
        if total <= 0:
            raise ValueError("counts must have a positive total")
        if exact:
            return cls(outcomes, [Fraction(c, total) for c in counts])
        return cls(outcomes, [c / total for c in counts])

    # -- accessors ---------------------------------------------------------

    def mass(self, outcome: Outcome) -> Mass:
        return self.masses[self._index[outcome]]

    def items(self) -> Iterator[tuple[Outcome, Mass]]:
        return zip(self.outcomes, self.masses)

    def support(self) -> tuple[Outcome, ...]:
        return tuple(x for x, m in self.items() if m > 0)

    def outcome_set(self) -> frozenset:
        return frozenset(self.outcomes)

    def __len__(self) -> int:
        return len(self.outcomes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Measure):
            return NotImplemented
        if self.outcome_set() != other.outcome_set():
            return False
        return all(self.mass(x) == other.mass(x) for x in self.outcomes)

    __hash__ = None  # mutable-free but identity-hashing would be misleading

    def __repr__(self) -> str:
        kind = "exact" if self.exact else "float"
        return f"Measure({kind}, {dict(self.items())!r})"


class ProductMeasure:
    """Lazy product of independent measures.

    The outcome space is the Cartesian product of the factor outcome
    sets; the mass of a tuple is the product of per-factor masses.
    Materialize with :meth:`to_measure` when an explicit measure is
    needed (e.g. for :func:`tv_distance`).
    """

    __slots__ = ("factors",)

    def __init__(self, factors: Sequence[Measure]):
        factors = tuple(factors)
        if not factors:
            raise ValueError("a product needs at least one factor")
        if len({f.exact for f in factors}) != 1:
            raise ValueError("cannot mix exact and float factors")
        object.__setattr__(self, "factors", factors)

    def __setattr__(self, name, value):
        raise AttributeError("ProductMeasure is immutable")

    @property
    def exact(self) -> bool:
        return self.factors[0].exact

    @property
    def size(self) -> int:
        n = 1
        for f in self.factors:
            n *= len(f)
        return n

    def mass(self, outcome_tuple: Sequence[Outcome]) -> Mass:
        if len(outcome_tuple) != len(self.factors):
            raise DomainMismatchError("tuple arity does not match factor count")
        acc: Mass = Fraction(1) if self.exact else 1.0
        for f, x in zip(self.factors, outcome_tuple):
            acc = acc * f.mass(x)
        return acc

    def iter_atoms(self) -> Iterator[tuple[tuple, Mass]]:
        for combo in itertools.product(*(f.items() for f in self.factors)):
            acc: Mass = Fraction(1) if self.exact else 1.0
            for _, m in combo:
                acc = acc * m
            yield tuple(x for x, _ in combo), acc

    def to_measure(self, max_outcomes: int | None = None) -> Measure:
        if max_outcomes is not None and self.size > max_outcomes:
            raise CapacityError(
                f"product has {self.size} outcomes, above the cap of {max_outcomes}")
        outcomes, masses = [], []
        for x, m in self.iter_atoms():
            outcomes.append(x)
            masses.append(m)
        return Measure(outcomes, masses)


def product(factors: Sequence[Measure]) -> ProductMeasure:
    return ProductMeasure(factors)


def product_measure(factors: Sequence[Measure],
                    max_outcomes: int | None = None) -> Measure:
    """Materialized product of independent measures, outcomes as tuples."""
    return ProductMeasure(factors).to_measure(max_outcomes)


class Involution:
    """A self-inverse bijection on an outcome set."""

    __slots__ = ("mapping",)

    def __init__(self, mapping: Mapping[Outcome, Outcome]):
        mapping = dict(mapping)
        for x, y in mapping.items():
            if y not in mapping or mapping[y] != x:
                raise ValueError(f"not an involution: f(f({x!r})) != {x!r}")
        object.__setattr__(self, "mapping", mapping)

    def __setattr__(self, name, value):
        raise AttributeError("Involution is immutable")

    def __call__(self, outcome: Outcome) -> Outcome:
        return self.mapping[outcome]

    def domain(self) -> frozenset:
        return frozenset(self.mapping)

    @classmethod
    def identity(cls, outcomes: Sequence[Outcome]) -> "Involution":
        return cls({x: x for x in outcomes})

    @classmethod
    def swap(cls, a: Outcome, b: Outcome, outcomes: Sequence[Outcome]) -> "Involution":
        m = {x: x for x in outcomes}
        m[a], m[b] = b, a
        return cls(m)

    @classmethod
    def transpose(cls, outcomes: Sequence[Outcome]) -> "Involution":
        """(x, y) -> (y, x) on the square of the given outcome set."""
        pairs = list(itertools.product(outcomes, repeat=2))
        return cls({(x, y): (y, x) for x, y in pairs})


# -- total variation ------------------------------------------------------


def _require_common_domain(p: Measure, q: Measure) -> None:
    if p.outcome_set() != q.outcome_set():
        raise DomainMismatchError("measures are not defined on the same outcome set")


def tv_distance(p: Measure, q: Measure) -> Mass:
    """Half the L1 distance between two measures on a common outcome set.

    Exact rational when both inputs are exact.
    """
    _require_common_domain(p, q)
    if p.exact and q.exact:
        total = sum(abs(pm - q.mass(x)) for x, pm in p.items())
        return total / 2
    return math.fsum(abs(float(pm) - float(q.mass(x))) for x, pm in p.items()) / 2.0


def commutator_tv(p: Measure, q: Measure,
                  max_outcomes: int = COMMUTATOR_OUTCOME_CAP) -> Mass:
    """Total variation of ``p x q - q x p`` by explicit pair enumeration.

    Computes (1/2) sum over (x, y) of ``|p(x) q(y) - q(x) p(y)|``.  Cost is
    quadratic in the outcome count; instances above ``max_outcomes`` must
    use the score-distribution path instead.
    """
    _require_common_domain(p, q)
    n = len(p)
    if n > max_outcomes:
        raise CapacityError(
            f"{n} outcomes exceed the pair-enumeration cap of {max_outcomes}; "
            "use the score-distribution path for large vocabularies")
    qs = [q.mass(x) for x in p.outcomes]
    if p.exact and q.exact:
        total = Fraction(0)
        for i, pi in enumerate(p.masses):
            qi = qs[i]
            for j, pj in enumerate(p.masses):
                total += abs(pi * qs[j] - qi * pj)
        return total / 2
    terms = []
    pm = [float(m) for m in p.masses]
    qm = [float(m) for m in qs]
    for i in range(n):
        for j in range(n):
            terms.append(abs(pm[i] * qm[j] - qm[i] * pm[j]))
    return math.fsum(terms) / 2.0


# -- involution equivalence -----------------------------------------------


def check_involution_equivalent(p: Measure, q: Measure, f: Involution,
                                tol: float = FLOAT_MASS_TOL) -> bool:
    """True iff ``p(x) = q(f(x))`` for every outcome x.

    Equality is exact in exact mode and within ``tol`` in float mode.
    """
    _require_common_domain(p, q)
    if f.domain() != p.outcome_set():
        raise DomainMismatchError("involution is not defined on the measures' outcome set")
    if p.exact and q.exact:
        return all(pm == q.mass(f(x)) for x, pm in p.items())
    return all(abs(float(pm) - float(q.mass(f(x)))) <= tol for x, pm in p.items())


def swap_sum_check(p: Measure, q: Measure, f: Involution,
                   phi: Callable[[Mass, Mass], Mass],
                   tol: float = SWAP_SUM_TOL) -> bool:
    """Whether ``sum phi(p(x), q(x))`` is invariant under swapping p and q.

    The identity holds for every bivariate phi whenever p and q are
    involution equivalent via f; this helper evaluates both sides so the
    hypothesis itself can be probed (non-equivalent pairs simply return
    False for a generic phi).
    """
    _require_common_domain(p, q)
    lhs = [phi(pm, q.mass(x)) for x, pm in p.items()]
    rhs = [phi(q.mass(x), pm) for x, pm in p.items()]
    if all(isinstance(v, (Fraction, int)) for v in lhs + rhs):
        return sum(lhs) == sum(rhs)
    return abs(math.fsum(map(float, lhs)) - math.fsum(map(float, rhs))) <= tol
