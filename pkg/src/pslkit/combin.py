"""Even-tuple counting and the moment bounds built on it.

A tuple is *even* when it can be arranged into pairs of equal values,
equivalently when every distinct value occurs an even number of times.
Exact counts of even tuples over small index boxes serve as independent
oracles for three closed-form bounds:

* |R| <= (2q-1)!! m^q for even tuples in {0..m-1}^{2q},
* |S| <= (8q-1)!! n^{2q-(t+1)/3} for the constrained double family,
* E[(C_u C_v)^{2p}] <= n^{2p} [(2p-1)!!]^2 (1 + K1 + K2),

together with the identity E[(C_u C_v)^{2p}] = |T| relating the moment
of a correlation product to a pure tuple count, and the T1/T2/T3
partition of T used in deriving the moment bound.

Counts are exact integers.  Bounds with irrational parts are evaluated
in floating point; when a test compares an exact count against such a
bound it shaves a relative margin of 1e-12 off the bound so that a
passing comparison is safe against rounding of the bound itself.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .seqcore import BudgetExceededError

__all__ = [
    "double_factorial",
    "is_even_tuple",
    "count_even_tuples",
    "bound_even_single",
    "count_S",
    "bound_S",
    "exact_moment_tuples",
    "exact_moment_sequences",
    "partition_T",
    "bound_moment",
    "MomentReport",
    "moment_report",
    "le_with_margin",
]

DEFAULT_ENUM_BUDGET = 8**8          # tuple boxes, e.g. m <= 8 with q <= 4
DEFAULT_PAIR_BUDGET = 2**26         # (n-u)^{2q} * (n-v)^{2q} style products
DEFAULT_SEQ_BUDGET = 2**20          # 2^n full sequence enumerations


def double_factorial(k: int) -> int:
    """(2k-1)!! = (2k-1)(2k-3)...3*1, the number of pairings of 2k objects."""
    if k < 1:
        raise ValueError(f"double_factorial needs k >= 1, got {k}")
    out = 1
    for i in range(2 * k - 1, 1, -2):
        out *= i
    return out


def is_even_tuple(values) -> bool:
    """True when every distinct value occurs an even number of times.

    Equivalent to the pairing definition: a permutation arranging the
    tuple into equal-valued pairs exists iff all multiplicities are
    even.  Odd-length tuples are never even; the empty tuple is.
    """
    return all(c % 2 == 0 for c in Counter(values).values())


def le_with_margin(count: int, bound: float, rel: float = 1e-12) -> bool:
    """count <= bound, downward-safe against rounding in the float bound."""
    return count <= bound * (1.0 - rel)


def _digit_matrix(start: int, stop: int, base: int, ndigits: int) -> np.ndarray:
    """Rows = mixed-radix digits of start..stop-1 in the given base."""
    idx = np.arange(start, stop, dtype=np.int64)
    digits = np.empty((len(idx), ndigits), dtype=np.int64)
    for j in range(ndigits):
        digits[:, j] = idx % base
        idx = idx // base
    return digits


def count_even_tuples(m: int, q: int, budget: int = DEFAULT_ENUM_BUDGET) -> int:
    """Exact number of even tuples in {0..m-1}^{2q}, by full enumeration.

    Each value's multiplicity parity is tracked as one bit, so a tuple
    is even iff the XOR of (1 << x_i) over its entries vanishes.
    """
    if m < 1 or q < 1:
        raise ValueError("m and q must be positive")
    total = m ** (2 * q)
    if total > budget:
        raise BudgetExceededError(
            f"m^(2q) = {total} exceeds enumeration budget {budget}"
        )
    count = 0
    chunk = 1 << 20
    for start in range(0, total, chunk):
        digits = _digit_matrix(start, min(start + chunk, total), m, 2 * q)
        masks = np.bitwise_xor.reduce(1 << digits, axis=1)
        count += int(np.count_nonzero(masks == 0))
    return count


def bound_even_single(m: int, q: int) -> float:
    """(2q-1)!! m^q, the pairing upper bound for count_even_tuples."""
    if m < 1 or q < 1:
        raise ValueError("m and q must be positive")
    return float(double_factorial(q) * m**q)


def _check_uv(n: int, u: int, v: int, ordered: bool) -> None:
    if not (0 < u < n and 0 < v < n):
        raise ValueError(f"shifts must satisfy 0 < u, v < n; got u={u}, v={v}, n={n}")
    if u == v:
        raise ValueError("shifts u and v must differ")
    if ordered and not u < v:
        raise ValueError(f"requires u < v, got u={u}, v={v}")


def _side_masks(shift: int, width: int, count: int) -> np.ndarray:
    """Parity masks of (x_i, x_i+shift)_{i<count} over x in [0, width)^count.

    Row index encodes the tuple in mixed radix; entry = XOR over i of
    (1 << x_i) ^ (1 << (x_i + shift)).
    """
    digits = _digit_matrix(0, width**count, width, count)
    per = (1 << digits) ^ (1 << (digits + shift))
    return np.bitwise_xor.reduce(per, axis=1)


def _tally(masks: np.ndarray) -> dict:
    vals, cnts = np.unique(masks, return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, cnts)}


def _join(a: dict, b: dict) -> int:
    """Sum over shared keys of a[k] * b[k], in exact integer arithmetic."""
    if len(b) < len(a):
        a, b = b, a
    return sum(c * b[k] for k, c in a.items() if k in b)


def _merge(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, 0) + c
    return out


def count_S(
    n: int,
    u: int,
    v: int,
    q: int,
    t: int,
    budget: int = DEFAULT_PAIR_BUDGET,
) -> int:
    """Exact |S| for the constrained even-tuple family.

    S holds the even tuples (x_i, x_i+u, y_i, y_i+v)_{i in I},
    I = {1..2q}, with 0 <= x_i < n-u and 0 <= y_i < n-v, such that
    (x_i)_{i in J} fails to be even for every (2q-2t)-element subset J.

    Both factor boxes are enumerated exhaustively; the x and y halves
    pair up exactly when their value-parity masks agree, which turns the
    product-space scan into two scans plus a tally join.
    """
    if not (0 <= t < q):
        raise ValueError(f"requires 0 <= t < q, got t={t}, q={q}")
    _check_uv(n, u, v, ordered=False)
    nx, ny = n - u, n - v
    if nx ** (2 * q) * ny ** (2 * q) > budget:
        raise BudgetExceededError(
            f"(n-u)^(2q) * (n-v)^(2q) exceeds enumeration budget {budget}"
        )

    xdigits = _digit_matrix(0, nx ** (2 * q), nx, 2 * q)
    xmask = np.bitwise_xor.reduce((1 << xdigits) ^ (1 << (xdigits + u)), axis=1)
    # J-condition: every (2q-2t)-subset of the bare x-values is not even
    keep = np.ones(len(xdigits), dtype=bool)
    for J in itertools.combinations(range(2 * q), 2 * q - 2 * t):
        sub = np.bitwise_xor.reduce(1 << xdigits[:, J], axis=1)
        keep &= sub != 0
    ytally = _tally(_side_masks(v, ny, 2 * q))
    return _join(_tally(xmask[keep]), ytally)


def bound_S(n: int, q: int, t: int) -> float:
    """(8q-1)!! n^{2q-(t+1)/3}, the upper bound matching count_S."""
    if n < 1 or q < 1 or t < 0:
        raise ValueError("requires n, q >= 1 and t >= 0")
    return double_factorial(4 * q) * float(n) ** (2 * q - (t + 1) / 3)


def exact_moment_tuples(
    n: int, u: int, v: int, p: int, budget: int = DEFAULT_PAIR_BUDGET
) -> int:
    """|T|: even tuples (x_i, x_i+u, y_i, y_i+v)_{i in 1..2p}.

    Equals the 2p-th moment of C_u C_v over uniform random sequences;
    exact_moment_sequences computes the same number the slow way.
    """
    if p < 1:
        raise ValueError("p must be positive")
    _check_uv(n, u, v, ordered=True)
    nx, ny = n - u, n - v
    if nx ** (2 * p) * ny ** (2 * p) > budget:
        raise BudgetExceededError(
            f"(n-u)^(2p) * (n-v)^(2p) exceeds enumeration budget {budget}"
        )
    return _join(
        _tally(_side_masks(u, nx, 2 * p)),
        _tally(_side_masks(v, ny, 2 * p)),
    )


def _all_correlations(n: int, shifts, chunk: int = 1 << 16):
    """Yield C_u columns for every sequence of length n, chunk by chunk."""
    js = np.arange(n, dtype=np.uint32)
    for start in range(0, 1 << n, chunk):
        codes = np.arange(start, min(start + chunk, 1 << n), dtype=np.uint32)
        a = (((codes[:, None] >> js) & 1).astype(np.int8) << 1) - 1
        yield {
            s: (a[:, : n - s].astype(np.int64) * a[:, s:]).sum(axis=1)
            for s in shifts
        }


def exact_moment_sequences(
    n: int, u: int, v: int, p: int, budget: int = DEFAULT_SEQ_BUDGET
) -> Fraction:
    """E[(C_u C_v)^{2p}] as an exact rational, averaged over all 2^n sequences.

    The tuple-count identity makes the result a nonnegative integer; it
    is returned as a Fraction so the identity can be asserted exactly.
    """
    if p < 1:
        raise ValueError("p must be positive")
    _check_uv(n, u, v, ordered=True)
    if (1 << n) > budget:
        raise BudgetExceededError(f"2^{n} exceeds sequence budget {budget}")
    total = 0
    exact_needed = (n * n) ** (2 * p) * (1 << n) >= (1 << 62)
    for cols in _all_correlations(n, (u, v)):
        prod = cols[u] * cols[v]
        if exact_needed:
            total += sum(int(x) ** (2 * p) for x in prod)
        else:
            total += int(np.sum(prod ** (2 * p)))
    return Fraction(total, 1 << n)


def _side_classes(shift: int, width: int, count: int, h: int):
    """Tally (parity mask -> count) for three classes of one-sided tuples.

    Classes: 'even' (the bare values form an even tuple), 'partial'
    (not even, but some (count-2h)-element subset of the values is
    even), 'bad' (no such subset).  An even tuple always contains an
    even subset of the required size, so the classes are exhaustive.
    """
    digits = _digit_matrix(0, width**count, width, count)
    per = (1 << digits) ^ (1 << (digits + shift))
    masks = np.bitwise_xor.reduce(per, axis=1)
    bare = np.bitwise_xor.reduce(1 << digits, axis=1)
    even = bare == 0
    has_even_subset = np.zeros(len(digits), dtype=bool)
    for J in itertools.combinations(range(count), count - 2 * h):
        sub = np.bitwise_xor.reduce(1 << digits[:, J], axis=1)
        has_even_subset |= sub == 0
    return (
        _tally(masks[even]),
        _tally(masks[~even & has_even_subset]),
        _tally(masks[~has_even_subset]),
    )


def partition_T(
    n: int,
    u: int,
    v: int,
    p: int,
    h: int,
    budget: int = DEFAULT_PAIR_BUDGET,
):
    """Exact sizes (|T1|, |T2|, |T3|) of the moment-proof partition of T.

    T1: both bare sides (x_i) and (y_i) are even.
    T2: not T1, but both sides contain an even (2p-2h)-element subset.
    T3: some side has no even (2p-2h)-element subset at all.
    """
    if not (0 <= h < p):
        raise ValueError(f"requires 0 <= h < p, got h={h}, p={p}")
    _check_uv(n, u, v, ordered=True)
    nx, ny = n - u, n - v
    if nx ** (2 * p) * ny ** (2 * p) > budget:
        raise BudgetExceededError(
            f"(n-u)^(2p) * (n-v)^(2p) exceeds enumeration budget {budget}"
        )
    xe, xp_, xb = _side_classes(u, nx, 2 * p, h)
    ye, yp_, yb = _side_classes(v, ny, 2 * p, h)
    t1 = _join(xe, ye)
    both_subset = _join(_merge(xe, xp_), _merge(ye, yp_))
    t2 = both_subset - t1
    t3 = _join(_merge(_merge(xe, xp_), xb), _merge(_merge(ye, yp_), yb)) - both_subset
    return t1, t2, t3


def bound_moment(n: int, u: int, v: int, p: int, h: int) -> float:
    """Moment bound n^{2p} [(2p-1)!!]^2 (1 + K1 + K2).

    K1 = p^{2h} (8h)^{4h} / n^{1/3} and K2 = (8p)^{3p} / n^{(h+1)/3},
    with (8h)^{4h} = 1 at h = 0 (empty product).
    """
    if not (0 <= h < p):
        raise ValueError(f"requires 0 <= h < p, got h={h}, p={p}")
    _check_uv(n, u, v, ordered=True)
    head = n ** (2 * p) * double_factorial(p) ** 2
    k1 = float(p ** (2 * h) * (8 * h) ** (4 * h)) / float(n) ** (1 / 3)
    k2 = float((8 * p) ** (3 * p)) / float(n) ** ((h + 1) / 3)
    return float(head) * (1.0 + k1 + k2)


@dataclass(frozen=True)
class MomentReport:
    """One verified instance of the moment identity and bound."""

    n: int
    u: int
    v: int
    p: int
    h: int
    exact: int
    tuple_count: int
    t1: int
    t2: int
    t3: int
    bound: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "u": self.u,
            "v": self.v,
            "p": self.p,
            "h": self.h,
            "exact": self.exact,
            "tuple_count": self.tuple_count,
            "t1": self.t1,
            "t2": self.t2,
            "t3": self.t3,
            "bound": self.bound,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def consistent(self) -> bool:
        return (
            self.exact == self.tuple_count
            and self.t1 + self.t2 + self.t3 == self.tuple_count
            and le_with_margin(self.exact, self.bound)
        )


def moment_report(
    n: int,
    u: int,
    v: int,
    p: int,
    h: int,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
    seq_budget: int = DEFAULT_SEQ_BUDGET,
) -> MomentReport:
    """Compute every side of the moment story for one parameter set."""
    exact = exact_moment_sequences(n, u, v, p, budget=seq_budget)
    if exact.denominator != 1:
        raise AssertionError(f"moment {exact} is not integral; identity broken")
    tuples = exact_moment_tuples(n, u, v, p, budget=pair_budget)
    t1, t2, t3 = partition_T(n, u, v, p, h, budget=pair_budget)
    return MomentReport(
        n=n,
        u=u,
        v=v,
        p=p,
        h=h,
        exact=int(exact),
        tuple_count=tuples,
        t1=t1,
        t2=t2,
        t3=t3,
        bound=bound_moment(n, u, v, p, h),
    )
