"""Even-tuple counting and the correlation-product moment identity.

A tuple is even when every value occurs an even number of times.  The
2p-th moment of C_u C_v over uniform random sequences equals the number
of even tuples (x_i, x_i+u, y_i, y_i+v): averaging kills every term in
the expanded product except those whose index multiset is even.  That
identity is checked here with two independent enumerations, and the
counts are compared with their closed-form pairing bounds.
"""

import json

from pslkit import (
    bound_even_single,
    bound_moment,
    bound_S,
    count_even_tuples,
    count_S,
    exact_moment_sequences,
    exact_moment_tuples,
    is_even_tuple,
    moment_report,
    partition_T,
)

print("== evenness ==")
for t in ((1, 3, 1, 4, 3, 4), (2, 1, 1, 2, 1, 3), ()):
    print(f"{t!r:>22} even? {is_even_tuple(t)}")

print()
print("== even tuples in boxes vs the pairing bound ==")
print(f"{'m':>2} {'q':>2} {'count':>8} {'bound':>10}")
for m in (2, 3, 4, 6):
    for q in (1, 2, 3):
        print(f"{m:>2} {q:>2} {count_even_tuples(m, q):>8} {bound_even_single(m, q):>10.0f}")

print()
print("== the constrained double family ==")
for n, u, v, q, t in ((4, 1, 2, 1, 0), (6, 1, 3, 1, 0), (6, 2, 5, 2, 1)):
    c = count_S(n, u, v, q, t)
    b = bound_S(n, q, t)
    print(f"|S(n={n}, u={u}, v={v}, q={q}, t={t})| = {c:>5}   bound {b:.1f}")

print()
print("== moment identity: average over sequences = tuple count ==")
print(f"{'n':>2} {'u':>2} {'v':>2} {'p':>2} {'moment':>10} {'tuples':>10}")
for n, u, v, p in ((6, 1, 2, 1), (8, 2, 5, 1), (10, 1, 9, 1), (8, 1, 4, 2)):
    seq_moment = exact_moment_sequences(n, u, v, p)
    tuples = exact_moment_tuples(n, u, v, p)
    assert seq_moment == tuples
    print(f"{n:>2} {u:>2} {v:>2} {p:>2} {int(seq_moment):>10} {tuples:>10}")

print()
print("== the T1/T2/T3 partition behind the moment bound ==")
n, u, v, p, h = 8, 1, 4, 2, 1
t1, t2, t3 = partition_T(n, u, v, p, h)
print(f"|T1|={t1}, |T2|={t2}, |T3|={t3}, total {t1+t2+t3}")
print(f"moment bound at (p={p}, h={h}): {bound_moment(n, u, v, p, h):.4g}")

print()
print("== one bundled report ==")
print(json.dumps(moment_report(8, 1, 4, 2, 1).to_dict(), indent=2))
