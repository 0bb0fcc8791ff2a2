import math
from fractions import Fraction

import numpy as np
import pytest

from pslkit import exact
from pslkit import bounds
from pslkit.seqcore import BinarySequence, BudgetExceededError, psl


def enumerate_psl(n):
    """Plain exhaustive scan: distribution, minimum, lexicographically
    smallest optimal sequence under the +1-first ordering."""
    counts = {}
    best = n
    best_seq = None
    for code in range(1 << n):
        a = [1 if (code >> j) & 1 else -1 for j in range(n)]
        m = max(
            abs(sum(a[j] * a[j + u] for j in range(n - u))) for u in range(1, n)
        )
        counts[m] = counts.get(m, 0) + 1
        if m < best:
            best, best_seq = m, a
        elif m == best:
            for x, y in zip(a, best_seq):
                if x != y:
                    if x == 1:
                        best_seq = a
                    break
    return counts, best, BinarySequence.from_elements(best_seq)


# --------------------------------------------------------------- min_psl


def test_min_psl_barker_lengths():
    for n in (2, 3, 4, 5, 7, 11, 13):
        assert exact.min_psl(n).min_psl == 1, n


def test_min_psl_n6_is_2():
    assert exact.min_psl(6).min_psl == 2


def test_min_psl_matches_plain_enumeration():
    for n in range(2, 13):
        counts, best, witness = enumerate_psl(n)
        summary = exact.min_psl(n)
        assert summary.min_psl == best, n
        assert summary.witness == witness, n


def test_min_psl_witness_verifies():
    for n in (14, 15, 18, 20):
        summary = exact.min_psl(n)
        assert psl(summary.witness) == summary.min_psl


def test_min_psl_budget():
    with pytest.raises(BudgetExceededError):
        exact.min_psl(29)
    with pytest.raises(BudgetExceededError):
        exact.min_psl(1)


# ----------------------------------------------------------- distribution


def test_distribution_n2():
    s = exact.exact_psl_distribution(2)
    assert s.distribution == {1: 4}
    assert s.expectation == 1


def test_distribution_n3():
    s = exact.exact_psl_distribution(3)
    assert s.distribution == {1: 4, 2: 4}
    assert s.expectation == Fraction(3, 2)


def test_distribution_n4():
    s = exact.exact_psl_distribution(4)
    assert s.expectation == Fraction(7, 4)
    assert sum(s.distribution.values()) == 16


def test_distribution_matches_plain_enumeration():
    for n in range(2, 12):
        counts, best, witness = enumerate_psl(n)
        s = exact.exact_psl_distribution(n)
        assert s.distribution == counts
        assert s.min_psl == best
        assert s.witness == witness


def test_distribution_counts_cover_space():
    for n in (5, 10, 14):
        s = exact.exact_psl_distribution(n)
        assert sum(s.distribution.values()) == 1 << n
        assert min(s.distribution) >= 1


def test_distribution_budget():
    with pytest.raises(BudgetExceededError):
        exact.exact_psl_distribution(21)


def test_gray_walk_agrees():
    for n in range(2, 11):
        assert exact.gray_psl_distribution(n) == exact.exact_psl_distribution(n).distribution


def test_summary_serialization():
    s = exact.exact_psl_distribution(3)
    d = s.to_dict()
    assert d["witness"] == s.witness.render()
    assert d["distribution"] == {"1": 4, "2": 4}
    assert d["expectation"] == [3, 2]
    csv = s.distribution_csv()
    assert csv.splitlines()[0] == "value,count"
    assert "1,4" in csv


# ----------------------------------------------------------- single tails


def test_tail_single_binomial_hand_case():
    lam = bounds.lambda_n(16)
    assert exact.exact_tail_single(16, 1, lam) == Fraction(242, 32768)


def test_tail_single_edges():
    assert exact.exact_tail_single(16, 1, 0.0) == 1
    assert exact.exact_tail_single(16, 1, -1.0) == 1
    assert exact.exact_tail_single(16, 1, 15.5) == 0
    assert exact.exact_tail_single(16, 15, 1.0) == 1


def test_tail_single_validation():
    with pytest.raises(ValueError):
        exact.exact_tail_single(16, 0, 1.0)
    with pytest.raises(ValueError):
        exact.exact_tail_single(16, 16, 1.0)


def test_tail_single_matches_enumeration():
    n = 12
    for lam in (1.0, 2.0, 3.0, 5.0, bounds.lambda_n(n)):
        table = exact.joint_tail_table(n, lam)
        for u, count in table["singles"].items():
            assert Fraction(count, 1 << n) == exact.exact_tail_single(n, u, lam)


# ------------------------------------------------------------ joint tails


def test_tail_joint_lambda_zero():
    assert exact.exact_tail_joint(8, 1, 2, 0.0) == 1


def test_tail_joint_validation():
    with pytest.raises(ValueError):
        exact.exact_tail_joint(8, 2, 2, 1.0)
    with pytest.raises(ValueError):
        exact.exact_tail_joint(8, 3, 2, 1.0)
    with pytest.raises(BudgetExceededError):
        exact.exact_tail_joint(25, 1, 2, 1.0)


def test_tail_joint_independence_factorization():
    # shifted products at u, v >= n/2 are independent: joint = product
    for n in (8, 10, 12):
        for lam in (1.0, 2.0, 4.0):
            for u in range(n // 2, n):
                for v in range(u + 1, n):
                    joint = exact.exact_tail_joint(n, u, v, lam)
                    assert joint == exact.exact_tail_single(
                        n, u, lam
                    ) * exact.exact_tail_single(n, v, lam), (n, u, v, lam)


def test_tail_joint_matches_table():
    n, lam = 10, 2.0
    table = exact.joint_tail_table(n, lam)
    for (u, v), count in table["joint"].items():
        assert Fraction(count, 1 << n) == exact.exact_tail_joint(n, u, v, lam)


# ------------------------------------------------------------ independence


def test_independence_small_cases():
    r = exact.independence_check(3, 1)
    assert r["uniform"] and r["expected_per_pattern"] == 2
    assert r["min_count"] == r["max_count"] == 2
    r = exact.independence_check(4, 2)
    assert r["uniform"] and r["expected_per_pattern"] == 4
    r = exact.independence_check(2, 1)
    assert r["uniform"] and r["expected_per_pattern"] == 2


def test_independence_sweep():
    for n in (6, 9, 12):
        for u in range(1, n):
            assert exact.independence_check(n, u)["uniform"], (n, u)


# ------------------------------------------------------------- bonferroni


def test_bonferroni_window():
    assert exact.admissible_shifts(8) == [1, 2, 3]
    assert exact.admissible_shifts(16) == list(range(1, 6))


def test_bonferroni_inequality_exact():
    for n in (6, 8, 10, 12):
        for lam in (1.0, 2.0, 3.0, bounds.lambda_n(n) / 2, bounds.lambda_n(n)):
            rep = exact.bonferroni_check(n, lam)
            assert rep["holds"], (n, lam, rep)
            assert isinstance(rep["lhs"], Fraction)


# ---------------------------------------------------------- concentration


def test_concentration_exact_small():
    for n in (2, 6, 10, 12):
        thetas = np.linspace(0.0, n - 1, 25)
        rows = exact.concentration_table_exact(n, thetas)
        assert all(r["holds"] for r in rows), n
        assert rows[0]["probability"] == 1
        assert rows[0]["bound"] == 2.0
