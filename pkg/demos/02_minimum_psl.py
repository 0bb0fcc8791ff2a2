"""Minimum peak sidelobe levels by exhaustive search.

Branch-and-bound over {-1,+1}^n finds the minimum M and the
lexicographically smallest witness.  M_n = 1 exactly at the Barker
lengths {2,3,4,5,7,11,13}; how M_n grows afterwards is open, so the
table below reports M_n / sqrt(n) as data, asserting nothing.

Pass a max length as the first argument (default 24; 28 adds ~15s).
"""

import math
import sys
import time

from pslkit import exact_psl_distribution, min_psl

max_n = int(sys.argv[1]) if len(sys.argv) > 1 else 24

print(f"{'n':>3} {'M_n':>4} {'M_n/sqrt(n)':>12} {'time':>8}  witness")
for n in range(2, max_n + 1):
    t0 = time.perf_counter()
    summary = min_psl(n)
    dt = time.perf_counter() - t0
    ratio = summary.min_psl / math.sqrt(n)
    print(
        f"{n:>3} {summary.min_psl:>4} {ratio:>12.4f} {dt:>7.2f}s  "
        f"{summary.witness.render()}"
    )

print()
print("full distribution of M over all 2^12 sequences of length 12:")
summary = exact_psl_distribution(12)
for value, count in sorted(summary.distribution.items()):
    bar = "#" * max(1, round(40 * count / (1 << 12)))
    print(f"  M = {value:>2}: {count:>5}  {bar}")
e = summary.expectation
print(f"exact E[M] = {e.numerator}/{e.denominator} = {float(e):.4f}")
