"""Aperiodic autocorrelation three ways, plus the symmetries it obeys.

The profile of a {-1,+1} sequence is C_u = sum_j a_j a_{j+u} for
0 <= u < n; the peak sidelobe level M is the largest |C_u| over the
nonzero shifts.  The package computes the profile by direct summation,
by XOR/popcount on bit-packed words, and by zero-padded FFT; all three
return the same integers.
"""

import random
import time

import numpy as np

from pslkit import (
    acf_bitparallel,
    acf_fft,
    acf_naive,
    parse_sequence,
    psl,
)
from pslkit.seqcore import alternate, negate, reverse, BinarySequence

print("== a tiny example ==")
seq = parse_sequence("++-")
profile = acf_naive(seq)
print(f"sequence {seq.render()}  ->  profile {list(profile.values)}, M = {profile.psl}")

print()
print("== the length-13 Barker sequence ==")
barker = parse_sequence("+++++--++-+-+")
profile = acf_naive(barker)
print(f"{barker.render()}: profile {list(profile.values)}")
print(f"all nonzero-shift correlations have magnitude {profile.psl}")

print()
print("== three paths, one answer ==")
rng = random.Random(1)
n = 4096
seq = BinarySequence(n, rng.getrandbits(n))
timings = {}
for name, fn in (("naive", acf_naive), ("bitparallel", acf_bitparallel), ("fft", acf_fft)):
    t0 = time.perf_counter()
    out = fn(seq)
    timings[name] = time.perf_counter() - t0
    print(f"{name:>12}: M = {out.psl}   ({timings[name]*1e3:.2f} ms)")
assert np.array_equal(acf_naive(seq).values, acf_fft(seq).values)

print()
print("== symmetries ==")
seq = BinarySequence(24, rng.getrandbits(24))
base = acf_naive(seq).values
print(f"sequence       {seq.render()}   M = {psl(seq)}")
print(f"negated        {negate(seq).render()}   M = {psl(negate(seq))}")
print(f"reversed       {reverse(seq).render()}   M = {psl(reverse(seq))}")
alt = alternate(seq)
print(f"alternated     {alt.render()}   M = {psl(alt)}")
flips = [int(v) * (-1) ** u for u, v in enumerate(acf_naive(alt).values)]
print(f"alternation maps C_u -> (-1)^u C_u: {flips == list(base)}")
