"""Executable checks of the structural facts behind the greedy guarantee.

The submodularity of the objective reduces, through an exchange of
involution-equivalent measures, to a four-term total-variation inequality
whose two-point ("Bernoulli") case is settled by a kernel argument: the
quantity to bound is a quadratic form v' M v where M(z, w) = m(l(z) - l(w))
for an explicit even function m, and m is positive definite because its
inverse Fourier transform has the nonnegative closed form m_tilde.

This module makes every link of that chain numerically checkable:

* ``c_func`` / ``m_func`` / ``m_tilde``  -- the closed forms;
* ``inverse_fourier_check``              -- quadrature vs. m_tilde;
* ``kernel_psd_check``                   -- eigenvalues of sampled M;
* ``bernoulli_lemma_check``              -- the four-term inequality on
  two-point swaps, by exact enumeration;
* ``general_lemma_check``                -- the same for arbitrary
  involution-equivalent pairs;
* ``bernoulli_pair_term``                -- the per-pair summand E(z, w),
  an independent route to the same inequality.

Checks raise :class:`VerificationError` when a fact that must hold is
violated; the randomized suites at the bottom power the ``verify-theory``
command.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad

from .errors import DomainMismatchError, VerificationError
from .measures import (
    Involution,
    Measure,
    check_involution_equivalent,
    product_measure,
    swap_sum_check,
    tv_distance,
)

#: Eigenvalue slack for float assembly of kernel matrices.
PSD_TOL = 1e-8

#: Float-mode slack for the four-term inequality.
LEMMA_FLOAT_TOL = 1e-10

#: Cap on kernel sizes for the eigensolve.
KERNEL_SIZE_CAP = 512


@dataclass(frozen=True, slots=True)
class BernoulliParams:
    """Success probabilities (r, s) of the two swapped two-point measures.

    ``r`` plays R(1) = R'(0) and ``s`` plays S(1) = S'(0); the
    complements are implied.  Rational values keep the lemma checks
    exact; the analytic functions below evaluate them as floats.
    """

    r: Fraction | float
    s: Fraction | float

    def __post_init__(self):
        for name, value in (("r", self.r), ("s", self.s)):
            if not 0 <= value <= 1:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")

    def measures(self) -> tuple[Measure, Measure, Measure, Measure]:
        """(R, R', S, S') on {0, 1} with R(1) = r and R'(1) = 1 - r."""
        r, s = self.r, self.s
        one = Fraction(1) if isinstance(r, (Fraction, int)) else 1.0
        R = Measure([0, 1], [one - r, r])
        Rp = Measure([0, 1], [r, one - r])
        one = Fraction(1) if isinstance(s, (Fraction, int)) else 1.0
        S = Measure([0, 1], [one - s, s])
        Sp = Measure([0, 1], [s, one - s])
        return R, Rp, S, Sp


def c_func(params: BernoulliParams, t: float) -> float:
    """c(t) = |r t - r'/t| + |r' t - r/t| - |t - 1/t| for t > 0.

    Symmetric under t <-> 1/t and under r <-> r'; identically zero at
    r = 1/2.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    r = float(params.r)
    rp = 1.0 - r
    return abs(r * t - rp / t) + abs(rp * t - r / t) - abs(t - 1.0 / t)


def m_func(params: BernoulliParams, t: float) -> float:
    """m(t) = c(e^t) - sqrt(s s') [c(sqrt(s/s') e^t) + c(sqrt(s'/s) e^t)].

    Even in t.  At the boundary s in {0, 1} the coefficient vanishes and
    the limit is c(e^t).
    """
    s = float(params.s)
    sp = 1.0 - s
    et = math.exp(t)
    if s <= 0.0 or s >= 1.0:
        return c_func(params, et)
    shift = math.sqrt(s / sp)
    return c_func(params, et) - math.sqrt(s * sp) * (
        c_func(params, shift * et) + c_func(params, et / shift))


def m_tilde(params: BernoulliParams, x: float) -> float:
    """Closed form of the inverse Fourier transform of m, up to a positive
    constant:

        4 / (1 + x^2)
          * (1 - 2 sqrt(s s') cos(x/2 log(s/s')))
          * (1 - 2 sqrt(r r') cos(x/2 log(r/r')))

    Nonnegative for all real x since 2 sqrt(p p') <= p + p' = 1.  At a
    boundary parameter (r or s in {0, 1}) the corresponding factor tends
    to 1.
    """

    def factor(p: float) -> float:
        if p <= 0.0 or p >= 1.0:
            return 1.0
        return 1.0 - 2.0 * math.sqrt(p * (1.0 - p)) * math.cos(
            0.5 * x * math.log(p / (1.0 - p)))

    return 4.0 / (1.0 + x * x) * factor(float(params.s)) * factor(float(params.r))


@dataclass(frozen=True, slots=True)
class FourierCheckResult:
    """Quadrature-vs-closed-form comparison across a grid."""

    max_deviation: float
    fitted_constant: float
    max_imaginary: float


def inverse_fourier_check(params: BernoulliParams, x_grid: Sequence[float],
                          quad_tol: float = 1e-9) -> FourierCheckResult:
    """Numerically invert m and compare against ``m_tilde``.

    m vanishes outside |t| <= T where T bounds the supports of c(e^t)
    and its two shifted copies, so the transform is a finite-interval
    adaptive quadrature.  The closed form is validated up to one fitted
    positive constant (the measured value is reported rather than
    guessed); the imaginary part must vanish because m is even.
    """
    r = float(params.r)
    s = float(params.s)
    if r <= 0.0 or r >= 1.0:
        raise ValueError("r must lie strictly between 0 and 1")
    if quad_tol <= 0:
        raise ValueError("quad_tol must be positive")

    half_log_r = 0.5 * abs(math.log(r / (1.0 - r)))
    half_log_s = 0.5 * abs(math.log(s / (1.0 - s))) if 0.0 < s < 1.0 else 0.0
    support = half_log_r + half_log_s
    if support == 0.0:  # r = 1/2 makes c, hence m, vanish identically
        grid = [float(x) for x in x_grid]
        dev = max((abs(m_tilde(params, x)) for x in grid), default=0.0)
        return FourierCheckResult(dev, 0.0, 0.0)

    kinks = sorted({
        t for t in (
            0.0,
            half_log_r, -half_log_r,
            half_log_s, -half_log_s,
            half_log_r + half_log_s, -(half_log_r + half_log_s),
            half_log_r - half_log_s, -(half_log_r - half_log_s),
        ) if -support < t < support
    })

    def m_of(t: float) -> float:
        return m_func(params, t)

    norm = 1.0 / math.sqrt(2.0 * math.pi)
    numeric = []
    max_imag = 0.0
    for x in x_grid:
        real, _ = quad(lambda t: m_of(t) * math.cos(t * x), -support, support,
                       points=kinks, limit=400, epsabs=quad_tol * 1e-2)
        imag, _ = quad(lambda t: -m_of(t) * math.sin(t * x), -support, support,
                       points=kinks, limit=400, epsabs=quad_tol * 1e-2)
        numeric.append(norm * real)
        max_imag = max(max_imag, abs(norm * imag))

    closed = [m_tilde(params, float(x)) for x in x_grid]
    denom = math.fsum(c * c for c in closed)
    if denom == 0.0:
        constant = 0.0
    else:
        constant = math.fsum(n * c for n, c in zip(numeric, closed)) / denom
    deviation = max(abs(n - constant * c) for n, c in zip(numeric, closed))
    return FourierCheckResult(deviation, constant, max_imag)


def _c_values(r: float, t: np.ndarray) -> np.ndarray:
    rp = 1.0 - r
    inv = 1.0 / t
    return np.abs(r * t - rp * inv) + np.abs(rp * t - r * inv) - np.abs(t - inv)


def _m_values(params: BernoulliParams, t: np.ndarray) -> np.ndarray:
    """Vectorized twin of :func:`m_func` for kernel assembly."""
    r = float(params.r)
    s = float(params.s)
    et = np.exp(t)
    if s <= 0.0 or s >= 1.0:
        return _c_values(r, et)
    shift = math.sqrt(s / (1.0 - s))
    return _c_values(r, et) - math.sqrt(s * (1.0 - s)) * (
        _c_values(r, shift * et) + _c_values(r, et / shift))


@dataclass(frozen=True, eq=False)
class KernelSpec:
    """A sampled difference kernel M(z, w) = m(l(z) - l(w))."""

    params: BernoulliParams
    scores: tuple[float, ...]
    matrix: np.ndarray

    @classmethod
    def build(cls, params: BernoulliParams, scores: Sequence[float]) -> "KernelSpec":
        scores = tuple(float(v) for v in scores)
        if not scores:
            raise ValueError("need at least one score")
        if len(scores) > KERNEL_SIZE_CAP:
            raise ValueError(f"at most {KERNEL_SIZE_CAP} scores supported")
        grid = np.asarray(scores)
        diffs = grid[:, None] - grid[None, :]
        matrix = _m_values(params, diffs)
        matrix = (matrix + matrix.T) / 2.0  # kill last-bit asymmetry
        return cls(params, scores, matrix)

    def __post_init__(self):
        n = len(self.scores)
        if self.matrix.shape != (n, n):
            raise ValueError("matrix dimension must match the score count")
        if np.max(np.abs(self.matrix - self.matrix.T)) > 1e-12:
            raise ValueError("kernel matrix must be symmetric")


def kernel_psd_check(spec: KernelSpec, tol: float = PSD_TOL) -> float:
    """Minimum eigenvalue of the sampled kernel; must be >= -tol.

    Raises :class:`VerificationError` if the spectrum dips below the
    tolerance, which would contradict positive definiteness of m.
    """
    min_eig = float(np.linalg.eigvalsh(spec.matrix)[0])
    if min_eig < -tol:
        raise VerificationError(
            f"kernel matrix has eigenvalue {min_eig}, below -{tol}")
    return min_eig


# -- the four-term total-variation inequality ------------------------------


def _four_term_lhs(R: Measure, Rp: Measure, S: Measure, Sp: Measure,
                   P: Measure, Q: Measure):
    if P.outcome_set() != Q.outcome_set():
        raise DomainMismatchError("P and Q must share a sample space")
    t1 = tv_distance(product_measure([R, S, P, Q]), product_measure([Rp, Sp, Q, P]))
    t2 = tv_distance(product_measure([R, P, Q]), product_measure([Rp, Q, P]))
    t3 = tv_distance(product_measure([S, P, Q]), product_measure([Sp, Q, P]))
    t4 = tv_distance(product_measure([P, Q]), product_measure([Q, P]))
    return t1 - t2 - t3 + t4


def bernoulli_lemma_check(params: BernoulliParams, P: Measure, Q: Measure):
    """Evaluate the four-term inequality for two-point swapped measures.

    Returns the left-hand side

        d_TV(R x S x P x Q, R' x S' x Q x P)
        - d_TV(R x P x Q, R' x Q x P)
        - d_TV(S x P x Q, S' x Q x P)
        + d_TV(P x Q, Q x P)

    which must be <= 0.  Exact inputs are checked exactly and raise
    :class:`VerificationError` on a positive value.
    """
    R, Rp, S, Sp = params.measures()
    lhs = _four_term_lhs(R, Rp, S, Sp, P, Q)
    if isinstance(lhs, Fraction) and lhs > 0:
        raise VerificationError(f"four-term inequality violated: lhs = {lhs}")
    return lhs


def general_lemma_check(R: Measure, R_prime: Measure, f: Involution,
                        S: Measure, S_prime: Measure, g: Involution,
                        P: Measure, Q: Measure):
    """Four-term inequality for arbitrary involution-equivalent pairs.

    The hypothesis R ~ R' (via f) and S ~ S' (via g) is verified first;
    without it the inequality claim is vacuous and a ValueError is
    raised.
    """
    if not check_involution_equivalent(R, R_prime, f):
        raise ValueError("R and R_prime are not involution equivalent via f")
    if not check_involution_equivalent(S, S_prime, g):
        raise ValueError("S and S_prime are not involution equivalent via g")
    lhs = _four_term_lhs(R, R_prime, S, S_prime, P, Q)
    if isinstance(lhs, Fraction) and lhs > 0:
        raise VerificationError(f"four-term inequality violated: lhs = {lhs}")
    return lhs


def bernoulli_pair_term(params: BernoulliParams, P: Measure, Q: Measure, z, w):
    """The per-pair summand E(z, w) of the Bernoulli-case inequality.

    Summing E over all outcome pairs gives the negated left-hand side of
    :func:`bernoulli_lemma_check`; pairs touching an outcome of zero
    mass under P or Q contribute zero in total (though not pointwise).
    """
    r, s = params.r, params.s
    one = Fraction(1) if isinstance(r, (Fraction, int)) and P.exact else 1.0
    rp = one - r
    sp = one - s
    a = P.mass(z) * Q.mass(w)
    b = Q.mass(z) * P.mass(w)
    half = Fraction(1, 2) if isinstance(a, Fraction) else 0.5
    return (abs(r * a - rp * b) + abs(s * a - sp * b)
            - abs(r * s * a - rp * sp * b) - abs(r * sp * a - rp * s * b)
            - half * abs(a - b))


def bernoulli_reduction_sides(P: Measure, P_prime: Measure,
                              phi: Callable[[object, object], object]):
    """Both sides of the two-point reduction identity for homogeneous phi.

    For involution-equivalent P ~ P', and phi with
    phi(lam * x, lam * y) = lam * phi(x, y):

        sum_x phi(P(x), P'(x))
          = sum_x (P(x) + P'(x)) / 2 * (phi(u, u') + phi(u', u))

    with u = P(x) / (P(x) + P'(x)) and u' its complement; outcomes with
    P(x) + P'(x) = 0 carry zero weight and are skipped.
    """
    lhs_terms = []
    rhs_terms = []
    for x, px in P.items():
        ppx = P_prime.mass(x)
        lhs_terms.append(phi(px, ppx))
        total = px + ppx
        if total == 0:
            continue
        u = px / total
        up = ppx / total
        rhs_terms.append((total / 2) * (phi(u, up) + phi(up, u)))
    if all(isinstance(v, (Fraction, int)) for v in lhs_terms + rhs_terms):
        return sum(lhs_terms), sum(rhs_terms)
    return math.fsum(map(float, lhs_terms)), math.fsum(map(float, rhs_terms))


# -- randomized suites (the verify-theory surface) -------------------------


def run_verification_suites(seed: int = 0, *,
                            lemma_trials: int = 1000,
                            general_trials: int = 500,
                            nonneg_trials: int = 1000,
                            kernel_trials: int = 1000,
                            fourier_trials: int = 3,
                            swap_trials: int = 200,
                            psd_tol: float = PSD_TOL,
                            fourier_tol: float = 1e-6) -> dict:
    """Run every randomized structural check and summarize margins.

    Deterministic in the seed.  The returned mapping has one entry per
    suite with trial/failure counts and the worst observed margin, plus
    a top-level ``passed`` flag.
    """
    import random

    from . import synth

    rng = random.Random(seed)
    summary: dict = {"seed": seed}

    # Four-term inequality, two-point case, exact arithmetic.
    worst_lhs = None
    failures = 0
    for _ in range(lemma_trials):
        den = rng.randint(1, 8)
        params = BernoulliParams(Fraction(rng.randint(0, den), den),
                                 Fraction(rng.randint(0, den), den))
        size = rng.randint(1, 4)
        P = synth.random_exact_measure(rng, size)
        Q = synth.random_exact_measure(rng, size)
        try:
            lhs = bernoulli_lemma_check(params, P, Q)
        except VerificationError:
            failures += 1
            continue
        if worst_lhs is None or lhs > worst_lhs:
            worst_lhs = lhs
    summary["bernoulli_lemma"] = {
        "trials": lemma_trials, "failures": failures,
        "worst_lhs": _as_float(worst_lhs),
    }

    # Four-term inequality, general involution-equivalent pairs.
    worst_general = None
    failures = 0
    for _ in range(general_trials):
        R, Rp, f = synth.equivalent_pair(rng, rng.randint(2, 4))
        S, Sp, g = synth.equivalent_pair(rng, rng.randint(2, 4))
        size = rng.randint(1, 3)
        P = synth.random_exact_measure(rng, size)
        Q = synth.random_exact_measure(rng, size)
        try:
            lhs = general_lemma_check(R, Rp, f, S, Sp, g, P, Q)
        except VerificationError:
            failures += 1
            continue
        if worst_general is None or lhs > worst_general:
            worst_general = lhs
    summary["general_lemma"] = {
        "trials": general_trials, "failures": failures,
        "worst_lhs": _as_float(worst_general),
    }

    # Closed-form nonnegativity on a grid.
    grid = [-50.0 + k for k in range(101)]
    worst_value = None
    failures = 0
    for _ in range(nonneg_trials):
        params = BernoulliParams(rng.random(), rng.random())
        low = min(m_tilde(params, x) for x in grid)
        if worst_value is None or low < worst_value:
            worst_value = low
        if low < -1e-12:
            failures += 1
    summary["m_tilde_nonnegative"] = {
        "trials": nonneg_trials, "failures": failures,
        "worst_value": _as_float(worst_value),
    }

    # Kernel positive semi-definiteness.
    worst_eig = None
    failures = 0
    for _ in range(kernel_trials):
        params = BernoulliParams(rng.random(), rng.random())
        n = rng.randint(1, 50)
        scores = [rng.uniform(-5.0, 5.0) for _ in range(n)]
        spec = KernelSpec.build(params, scores)
        min_eig = float(np.linalg.eigvalsh(spec.matrix)[0])
        if min_eig < -psd_tol:
            failures += 1
        if worst_eig is None or min_eig < worst_eig:
            worst_eig = min_eig
    summary["kernel_psd"] = {
        "trials": kernel_trials, "failures": failures,
        "worst_min_eigenvalue": _as_float(worst_eig),
    }

    # Quadrature inversion against the closed form.
    xs = [-10.0 + 0.2 * k for k in range(101)]
    worst_dev = None
    constants = []
    failures = 0
    for _ in range(fourier_trials):
        params = BernoulliParams(rng.uniform(0.15, 0.45), rng.uniform(0.2, 0.8))
        result = inverse_fourier_check(params, xs, quad_tol=1e-9)
        if worst_dev is None or result.max_deviation > worst_dev:
            worst_dev = result.max_deviation
        constants.append(result.fitted_constant)
        if result.max_deviation > fourier_tol or result.max_imaginary > fourier_tol:
            failures += 1
    summary["inverse_fourier"] = {
        "trials": fourier_trials, "failures": failures,
        "worst_deviation": _as_float(worst_dev),
        "fitted_constants": [round(c, 12) for c in constants],
    }

    # Swap identity and the two-point reduction identity.
    failures = 0
    for _ in range(swap_trials):
        P, Pp, f = synth.equivalent_pair(rng, rng.randint(1, 6))
        phi = synth.random_homogeneous_phi(rng)
        if not swap_sum_check(P, Pp, f, phi):
            failures += 1
            continue
        lhs, rhs = bernoulli_reduction_sides(P, Pp, phi)
        if lhs != rhs:
            failures += 1
    summary["swap_identities"] = {"trials": swap_trials, "failures": failures}

    summary["passed"] = all(
        entry.get("failures", 0) == 0
        for entry in summary.values() if isinstance(entry, dict)
    )
    return summary


def _as_float(value):
    if value is None:
        return None
    return float(value)
