"""Graph-derived worst-case instances for cross search and their identities.

Each instance encodes a graph as a joint distribution: one ternary column
per vertex (values '0', '1' and the placeholder '#'), a uniformly chosen
edge gets two independent uniform bits on its endpoint columns, every
other column reads '#', and the label is the XOR of the two bits.  For a
vertex subset S inducing a fraction phi of all edges:

* I(S; C) = phi exactly, and
* 2 * auc*(S) - 1 = 1 - (1 - phi)^2 exactly

(with ties at half weight, the phi mass of perfectly separated outcomes
also wins against the shared bulk, which is where the quadratic comes
from).  Both right-hand sides are strictly increasing in phi, so subset
quality still maps onto induced-subgraph density, and both identities
are checkable with exact arithmetic.

These joints deliberately violate conditional independence (any instance
with an edge does), which is why the greedy guarantee does not apply to
them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import AbstractSet

from .errors import DatasetError, VerificationError
from .joint_eval import JointTable, auc_star_joint, mutual_information

#: Placeholder value carried by all columns off the sampled edge.
BLANK = "#"

VOCABULARY = ("0", "1", BLANK)


@dataclass(frozen=True, slots=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError("vertex count must be positive")
        seen = set()
        clean = []
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of vertex range 0..{self.n - 1}")
            key = (min(u, v), max(u, v))
            if key in seen:
                continue
            seen.add(key)
            clean.append(key)
        object.__setattr__(self, "edges", tuple(sorted(clean)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def induced_edge_count(self, vertices: AbstractSet[int]) -> int:
        s = set(vertices)
        return sum(1 for u, v in self.edges if u in s and v in s)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, tuple((u, v) for u in range(n) for v in range(u + 1, n)))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, tuple((i, i + 1) for i in range(n - 1)))

    @classmethod
    def star(cls, n: int) -> "Graph":
        return cls(n, tuple((0, i) for i in range(1, n)))


def parse_edge_list(text: str, *, min_vertices: int = 0) -> Graph:
    """Parse a plain-text edge list: one ``u v`` pair per line, 0-indexed.

    Lines starting with '#' and blank lines are ignored.  The vertex
    count is the largest endpoint plus one (at least ``min_vertices``).
    """
    edges = []
    top = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise DatasetError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise DatasetError(f"line {lineno}: endpoints must be integers, got {raw!r}")
        if u < 0 or v < 0:
            raise DatasetError(f"line {lineno}: endpoints must be nonnegative")
        edges.append((u, v))
        top = max(top, u, v)
    if not edges:
        raise DatasetError("edge list is empty")
    n = max(top + 1, min_vertices)
    return Graph(n, tuple(edges))


def load_graph(path: str | Path, *, min_vertices: int = 0) -> Graph:
    return parse_edge_list(Path(path).read_text(encoding="utf-8"),
                           min_vertices=min_vertices)


@dataclass(frozen=True, slots=True)
class HardInstance:
    """The exact joint distribution encoding one graph."""

    joint: JointTable
    source_graph: Graph


def build_hard_instance(g: Graph) -> HardInstance:
    """Materialize the exact distribution: 4 rows of mass 1/(4m) per edge."""
    if g.m == 0:
        raise DatasetError("the construction needs at least one edge")
    mass = Fraction(1, 4 * g.m)
    rows: dict = {}
    for u, v in g.edges:
        for bu in (0, 1):
            for bv in (0, 1):
                values = [BLANK] * g.n
                values[u] = str(bu)
                values[v] = str(bv)
                label = bu ^ bv
                key = (tuple(values), label)
                rows[key] = rows.get(key, Fraction(0)) + mass
    columns = [(vertex, VOCABULARY) for vertex in range(g.n)]
    return HardInstance(JointTable(columns, rows), g)


def sample_hard_dataset(g: Graph, m_rows: int, seed: int) -> list[tuple[str, ...]]:
    """Draw i.i.d. rows from the instance distribution.

    Each row is the n feature values followed by the label as a string;
    output is a pure function of (graph, m_rows, seed).
    """
    if g.m == 0:
        raise DatasetError("the construction needs at least one edge")
    if m_rows < 1:
        raise ValueError("m_rows must be at least 1")
    rng = random.Random(seed)
    rows = []
    for _ in range(m_rows):
        u, v = g.edges[rng.randrange(g.m)]
        bu = rng.randrange(2)
        bv = rng.randrange(2)
        values = [BLANK] * g.n
        values[u] = str(bu)
        values[v] = str(bv)
        rows.append(tuple(values) + (str(bu ^ bv),))
    return rows


@dataclass(frozen=True, slots=True)
class ReductionRecord:
    """Subset-level identity check: all three quantities must coincide."""

    phi: Fraction
    normalized_auc: Fraction
    mutual_information_bits: Fraction


def verify_reduction(g: Graph, vertices: AbstractSet[int], *,
                     instance: HardInstance | None = None) -> ReductionRecord:
    """Check the subset-level identities of the construction, exactly.

    ``phi`` is the induced-edge fraction of S, counted directly on the
    graph; the instance must then satisfy I(S; C) = phi and
    2 * auc*(S) - 1 = 1 - (1 - phi)^2 with exact arithmetic.  Raises
    :class:`VerificationError` on any mismatch.
    """
    s = set(vertices)
    if any(not (0 <= v < g.n) for v in s):
        raise ValueError("subset contains out-of-range vertices")
    if instance is None:
        instance = build_hard_instance(g)
    phi = Fraction(g.induced_edge_count(s), g.m)
    normalized = 2 * auc_star_joint(instance.joint, s) - 1
    mi = mutual_information(instance.joint, s)
    if normalized != 1 - (1 - phi) ** 2:
        raise VerificationError(
            f"normalized AUC {normalized} differs from 1-(1-phi)^2 at phi = {phi}")
    if mi != phi:
        raise VerificationError(
            f"mutual information {mi} differs from induced-edge fraction {phi}")
    return ReductionRecord(phi, normalized, mi)
