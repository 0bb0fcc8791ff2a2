"""The slow climb of M / sqrt(n log n) toward sqrt(2).

In the limit the normalized peak sidelobe level of a random sequence
concentrates at sqrt(2) ~ 1.4142.  At reachable lengths the mean sits
well below that and climbs slowly; the closed-form lower bound for the
mean, sqrt(2) - sqrt((3 log log n + 2 log 20)/log n), is still negative
at these sizes, which is a vivid way to see how asymptotic the story
is.  The sampled means are exact-checked against full enumeration where
that is possible.

Pass trial count as the first argument (default 400).
"""

import math
import sys

from pslkit import exact_psl_distribution, trend_report
from pslkit.montecarlo import trend_csv

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 400

lengths = [16, 64, 256, 1024, 4096, 16384]
rows = trend_report(lengths, trials, seed=11, workers=4)

print(f"{'n':>6} {'mean ratio':>11} {'std err':>9} {'mean lower bound':>17}")
for r in rows:
    print(
        f"{r['n']:>6} {r['mean']:>11.4f} {r['se']:>9.4f} {r['lower_bound']:>17.4f}"
    )
print(f"{'limit':>6} {math.sqrt(2):>11.4f}")

print()
exact16 = float(exact_psl_distribution(16).expectation) / math.sqrt(16 * math.log(16))
print(f"exact mean ratio at n=16 (enumeration): {exact16:.4f}")
print(f"sampled mean ratio at n=16:             {rows[0]['mean']:.4f}")

print()
print("CSV (what `psl simulate trend` writes):")
print(trend_csv(rows), end="")
