"""Brute-force reference implementations, kept independent of the package.

Everything here recomputes quantities the slow, obvious way (double
loops, explicit enumeration) so package outputs can be checked against
a second route.  Scores are represented as (rank, ratio) tuples with
rank -1/0/+1 for -inf / finite / +inf; finite ratios are Fractions.
"""

from fractions import Fraction

NEG = (-1, Fraction(0))
POS = (1, Fraction(0))


def finite(ratio) -> tuple:
    return (0, Fraction(ratio))


def score_lt(a: tuple, b: tuple) -> bool:
    if a[0] != b[0]:
        return a[0] < b[0]
    return a[1] < b[1]


def tv_oracle(p: dict, q: dict):
    assert set(p) == set(q)
    return sum(abs(p[x] - q[x]) for x in p) / 2


def commutator_oracle(p: dict, q: dict):
    assert set(p) == set(q)
    total = 0
    for x in p:
        for y in p:
            total += abs(p[x] * q[y] - q[x] * p[y])
    return total / 2


def auc_pairs_oracle(atoms):
    """AUC from (score, w1, w0) atoms by pairwise comparison."""
    total = 0
    for s_i, w1_i, _ in atoms:
        for s_j, _, w0_j in atoms:
            if score_lt(s_j, s_i):
                total += w1_i * w0_j
            elif s_i == s_j:
                total += Fraction(1, 2) * w1_i * w0_j
    return total


def convolve_oracle(atoms_a, atoms_b):
    """Convolution of (score, w1, w0) atom lists by full pair enumeration."""
    acc = {}
    for sa, w1a, w0a in atoms_a:
        for sb, w1b, w0b in atoms_b:
            w1 = w1a * w1b
            w0 = w0a * w0b
            if w1 == 0 and w0 == 0:
                continue
            if sa[0] == 0 and sb[0] == 0:
                s = finite(sa[1] * sb[1])
            elif sa[0] == 0:
                s = sb
            elif sb[0] == 0:
                s = sa
            elif sa[0] == sb[0]:
                s = sa
            else:  # opposite infinities carry zero mass, filtered above
                raise AssertionError("mixed infinity with nonzero mass")
            prev = acc.get(s, (Fraction(0), Fraction(0)))
            acc[s] = (prev[0] + w1, prev[1] + w0)
    return acc


def atoms_from_pair(p1: dict, p0: dict):
    """Per-outcome score atoms from two conditional mass dicts."""
    acc = {}
    for x in p1:
        m1, m0 = p1[x], p0[x]
        if m1 == 0 and m0 == 0:
            continue
        if m0 == 0:
            s = POS
        elif m1 == 0:
            s = NEG
        else:
            s = finite(Fraction(m1) / Fraction(m0))
        prev = acc.get(s, (Fraction(0), Fraction(0)))
        acc[s] = (prev[0] + m1, prev[1] + m0)
    return [(s, w1, w0) for s, (w1, w0) in acc.items()]


def mi_oracle_bits(cells: dict) -> float:
    """I(X; C) from a {(x, c): mass} dict, float arithmetic."""
    import math

    px = {}
    pc = {}
    for (x, c), m in cells.items():
        px[x] = px.get(x, 0) + m
        pc[c] = pc.get(c, 0) + m
    total = 0.0
    for (x, c), m in cells.items():
        if m == 0:
            continue
        total += float(m) * math.log2(float(m) / (float(px[x]) * float(pc[c])))
    return total


def induced_edges_oracle(edges, vertices) -> int:
    s = set(vertices)
    return sum(1 for u, v in edges if u in s and v in s)


def marginalize_oracle(rows: dict, positions, label):
    """Conditional law of selected coordinates given the label."""
    out = {}
    denom = 0
    for (values, lab), mass in rows.items():
        if lab != label:
            continue
        denom += mass
        key = tuple(values[i] for i in positions)
        out[key] = out.get(key, Fraction(0)) + mass
    return {k: v / denom for k, v in out.items()}
