"""Closed-form thresholds, tail bounds, and inequality checks.

Every logarithm here is the natural logarithm; that convention is fixed
package-wide.  All functions are pure and total over their stated
domains.  None of them assumes any "sufficiently large n" clause: a
caller asking whether an inequality holds at a concrete n gets the
honest answer for that n via :func:`inequality_check`.

Exact +/-1 sums: the tail Pr[|sum of m +/-1 terms| >= t] is computed
from binomial coefficients in log space with compensated summation;
absolute error is held near 1e-12, far below any tail probability the
package compares against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .combin import double_factorial

__all__ = [
    "lambda_n",
    "xi_n",
    "ThresholdSet",
    "phi_tail",
    "gaussian_sandwich",
    "lower_bound_single",
    "upper_bound_joint",
    "k1_term",
    "k2_term",
    "markov_joint_bound",
    "proof_moment_params",
    "mcdiarmid_bound",
    "psl_tail_lower",
    "expectation_lower",
    "pm1_tail",
    "cramer_ratio",
    "stirling_log_bounds",
    "inequality_check",
    "SQRT2",
]

SQRT2 = math.sqrt(2.0)


def lambda_n(n: int) -> float:
    """Threshold sqrt(2 n log n) used by every tail statement."""
    if n < 2:
        raise ValueError(f"lambda_n needs n >= 2, got {n}")
    return math.sqrt(2.0 * n * math.log(n))


def xi_n(n: int, u: int) -> float:
    """Normalized threshold sqrt(2 n log n / (n - u)) for shift u."""
    if n < 2:
        raise ValueError(f"xi_n needs n >= 2, got {n}")
    if not 0 < u < n:
        raise ValueError(f"shift must satisfy 0 < u < n, got u={u}")
    return math.sqrt(2.0 * n * math.log(n) / (n - u))


@dataclass(frozen=True)
class ThresholdSet:
    """lambda_n and xi_n(u) for one sequence length n > 2."""

    n: int

    def __post_init__(self):
        if self.n <= 2:
            raise ValueError(f"ThresholdSet needs n > 2, got {self.n}")

    @property
    def lam(self) -> float:
        return lambda_n(self.n)

    def xi(self, u: int) -> float:
        return xi_n(self.n, u)


def phi_tail(z: float) -> float:
    """Phi(-z), the standard normal upper-tail mass beyond z.

    Computed through erfc; relative accuracy exceeds 12 significant
    digits throughout |z| <= 8.
    """
    return 0.5 * math.erfc(z / SQRT2)


def gaussian_sandwich(z: float):
    """(lower, Phi(-z), upper) for the classical tail sandwich at z > 0.

    lower = (1/z - 1/z^3) e^{-z^2/2} / sqrt(2 pi) and
    upper = (1/z)         e^{-z^2/2} / sqrt(2 pi).
    The lower member is negative for z < 1, where it is vacuous.
    """
    if z <= 0:
        raise ValueError(f"sandwich requires z > 0, got {z}")
    envelope = math.exp(-0.5 * z * z) / (math.sqrt(2.0 * math.pi) * z)
    return envelope * (1.0 - 1.0 / (z * z)), phi_tail(z), envelope


def lower_bound_single(n: int) -> float:
    """1 / (5 n sqrt(log n)), the single-shift tail lower bound."""
    if n <= 2:
        raise ValueError(f"requires n > 2, got {n}")
    return 1.0 / (5.0 * n * math.sqrt(math.log(n)))


def upper_bound_joint(n: int) -> float:
    """23 / n^2, the joint-tail upper bound."""
    if n < 1:
        raise ValueError(f"requires n >= 1, got {n}")
    return 23.0 / (n * n)


def k1_term(n: int, p: int, h: int) -> float:
    """K1 = n^{-1/3} p^{2h} (8h)^{4h}, with (8*0)^0 = 1."""
    return float(p ** (2 * h) * (8 * h) ** (4 * h)) / float(n) ** (1.0 / 3.0)


def k2_term(n: int, p: int, h: int) -> float:
    """K2 = n^{-(h+1)/3} (8p)^{3p}."""
    return float((8 * p) ** (3 * p)) / float(n) ** ((h + 1) / 3.0)


def markov_joint_bound(n: int, p: int, h: int) -> float:
    """Markov/moment bound on the joint tail at lambda_n.

    [(2p-1)!!]^2 / (2 log n)^{2p} * (1 + K1 + K2).  Requires n >= 3 so
    that p >= 1 makes sense, and h < p as in the moment bound.
    """
    if n < 3:
        raise ValueError(f"requires n >= 3, got {n}")
    if p < 1:
        raise ValueError("p must be positive")
    if not 0 <= h < p:
        raise ValueError(f"requires 0 <= h < p, got h={h}, p={p}")
    head = float(double_factorial(p)) ** 2 / (2.0 * math.log(n)) ** (2 * p)
    return head * (1.0 + k1_term(n, p, h) + k2_term(n, p, h))


def proof_moment_params(n: int):
    """The parameter choice p = floor(log n), h = floor(14 log log n).

    Note: h < p only holds for astronomically large n (around e^60); at
    desk scale these defaults are mutually inconsistent and
    markov_joint_bound will reject them.  They are exposed so that the
    inconsistency can be measured rather than assumed away.
    """
    if n < 3:
        raise ValueError(f"requires n >= 3, got {n}")
    p = int(math.log(n))
    h = int(14.0 * math.log(math.log(n))) if math.log(n) > 1 else 0
    return p, h


def mcdiarmid_bound(n: int, theta: float) -> float:
    """Bounded-differences tail bound 2 exp(-theta^2 / (2n)) for M."""
    if n < 1:
        raise ValueError(f"requires n >= 1, got {n}")
    if theta < 0:
        raise ValueError(f"theta must be >= 0, got {theta}")
    return 2.0 * math.exp(-theta * theta / (2.0 * n))


def psl_tail_lower(n: int) -> float:
    """1 / (10 (log n)^{3/2}), the Pr[M >= lambda_n] lower bound."""
    if n <= 2:
        raise ValueError(f"requires n > 2, got {n}")
    return 1.0 / (10.0 * math.log(n) ** 1.5)


def expectation_lower(n: int) -> float:
    """sqrt(2) - sqrt((3 log log n + 2 log 20) / log n).

    Tends to sqrt(2) as n grows; negative at small n, where it is
    vacuous but still well defined.
    """
    if n < 3:
        raise ValueError(f"requires n >= 3, got {n}")
    return SQRT2 - math.sqrt(
        (3.0 * math.log(math.log(n)) + 2.0 * math.log(20.0)) / math.log(n)
    )


def pm1_tail(m: int, threshold: float) -> float:
    """Pr[|S_m| >= threshold] for S_m a sum of m independent +/-1 variables.

    Exact binomial computation in log space: S_m = 2K - m with K
    binomial(m, 1/2), so the two-sided tail is twice the upper tail over
    k >= ceil((m + threshold) / 2).  Terms are combined by compensated
    summation (math.fsum) after factoring out the largest exponent.
    """
    if m < 1:
        raise ValueError(f"requires m >= 1, got {m}")
    if threshold <= 0:
        return 1.0
    if threshold > m:
        return 0.0
    kmin = math.ceil((m + threshold) / 2.0)
    if kmin > m:
        return 0.0
    k = np.arange(kmin, m + 1, dtype=np.float64)
    logs = gammaln(m + 1.0) - gammaln(k + 1.0) - gammaln(m - k + 1.0) - m * math.log(2.0)
    peak = float(np.max(logs))
    total = math.fsum(math.exp(float(x) - peak) for x in logs)
    return min(1.0, 2.0 * math.exp(peak) * total)


def cramer_ratio(n: int, theta: float) -> float:
    """Exact tail over Gaussian tail: Pr[|Y_n| >= theta sqrt(n)] / (2 Phi(-theta)).

    Y_n is a sum of n independent +/-1 variables.  The refinement of the
    central limit theorem says this ratio tends to 1 whenever theta_n
    grows slower than n^{1/6}; the caller picks the evaluation point.
    """
    if theta <= 0:
        raise ValueError(f"theta must be positive, got {theta}")
    return pm1_tail(n, theta * math.sqrt(n)) / (2.0 * phi_tail(theta))


def stirling_log_bounds(k: int):
    """(log lower, log k!, log upper) for the Stirling sandwich.

    sqrt(2 pi k) k^k e^{-k} <= k! <= sqrt(3 pi k) k^k e^{-k}, all three
    returned in log space so the check survives k well past 170.
    """
    if k < 1:
        raise ValueError(f"requires k >= 1, got {k}")
    base = k * math.log(k) - k
    lower = 0.5 * math.log(2.0 * math.pi * k) + base
    upper = 0.5 * math.log(3.0 * math.pi * k) + base
    return lower, math.lgamma(k + 1.0), upper


def inequality_check(name: str, n: int, lhs: float, rhs: float) -> dict:
    """Uniform holds/fails record for one inequality instance."""
    return {"name": name, "n": n, "lhs": lhs, "rhs": rhs, "holds": bool(lhs <= rhs)}
