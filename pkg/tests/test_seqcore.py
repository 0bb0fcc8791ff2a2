import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pslkit import seqcore as sc


def brute_profile(elems):
    """Direct summation in plain Python: the reference for everything."""
    n = len(elems)
    return [
        sum(int(elems[j]) * int(elems[j + u]) for j in range(n - u))
        for u in range(n)
    ]


def random_sequence(rng: random.Random, n: int) -> sc.BinarySequence:
    return sc.BinarySequence(n, rng.getrandbits(n))


# ---------------------------------------------------------------- parsing


def test_parse_plusminus():
    s = sc.parse_sequence("+-+")
    assert list(s.elements()) == [1, -1, 1]


def test_parse_binary01():
    s = sc.parse_sequence("110", "binary01")
    assert list(s.elements()) == [1, 1, -1]


def test_parse_invalid_character_position():
    with pytest.raises(sc.SequenceParseError) as err:
        sc.parse_sequence("+x+")
    assert err.value.position == 2


def test_parse_empty():
    with pytest.raises(sc.SequenceParseError):
        sc.parse_sequence("   ")


def test_parse_skips_whitespace():
    s = sc.parse_sequence(" +\t-\n+ ")
    assert s.render() == "+-+"


@given(st.integers(min_value=1, max_value=200), st.randoms(use_true_random=False))
@settings(max_examples=100, deadline=None)
def test_parse_render_roundtrip(n, rnd):
    seq = sc.BinarySequence(n, rnd.getrandbits(n))
    for enc in ("plusminus", "binary01"):
        assert sc.parse_sequence(seq.render(enc), enc) == seq


def test_read_sequence_lines_comments_and_errors():
    lines = ["# header", "", "+-+", "10", "+bad"]
    out = list(sc.read_sequence_lines(lines[:4]))
    assert [(m, s.render()) for m, s in out] == [(3, "+-+"), (4, "+-")]
    with pytest.raises(sc.SequenceParseError, match="line 5"):
        list(sc.read_sequence_lines(lines))


def test_binary_record_roundtrip():
    rng = random.Random(5)
    blob = b""
    seqs = [random_sequence(rng, n) for n in (1, 7, 64, 65, 200)]
    for s in seqs:
        blob += sc.sequence_to_bytes(s)
    offset = 0
    for s in seqs:
        got, offset = sc.sequence_from_bytes(blob, offset)
        assert got == s
    assert offset == len(blob)


def test_binary_record_rejects_garbage():
    s = sc.parse_sequence("+-+")
    raw = bytearray(sc.sequence_to_bytes(s))
    raw[16] |= 0x08  # set a bit beyond n=3
    with pytest.raises(ValueError):
        sc.sequence_from_bytes(bytes(raw))


def test_words_layout():
    s = sc.BinarySequence(70, (1 << 69) | 1)
    w = s.words()
    assert w.dtype == np.uint64 and len(w) == 2
    assert int(w[0]) == 1 and int(w[1]) == 1 << 5


# ------------------------------------------------------------------- acf


def test_acf_hand_example():
    seq = sc.parse_sequence("++-")
    for path in (sc.acf_naive, sc.acf_bitparallel, sc.acf_fft):
        p = path(seq)
        assert list(p.values) == [3, 0, -1]
        assert p.psl == 1


def test_acf_all_ones():
    seq = sc.parse_sequence("+" * 5)
    p = sc.acf_naive(seq)
    assert list(p.values) == [5, 4, 3, 2, 1]
    assert p.psl == 4
    p64 = sc.acf_fft(sc.parse_sequence("+" * 64))
    assert list(p64.values) == list(range(64, 0, -1))


def test_acf_barker13():
    barker = sc.parse_sequence("+++++--++-+-+")
    p = sc.acf_naive(barker)
    assert p.psl == 1
    assert list(p.values) == brute_profile(barker.elements())


def test_acf_n2():
    p = sc.acf_bitparallel(sc.parse_sequence("+-"))
    assert list(p.values) == [2, -1]
    assert p.psl == 1


def test_acf_n1_has_no_psl():
    p = sc.acf_naive(sc.parse_sequence("+"))
    assert list(p.values) == [1]
    assert p.psl is None


def test_acf_paths_agree_and_satisfy_invariants():
    rng = random.Random(99)
    lengths = [1, 2, 3, 4, 5, 31, 32, 33, 63, 64, 65, 127, 128, 129, 1000, 4096]
    lengths += [rng.randint(2, 512) for _ in range(60)]
    for n in lengths:
        seq = random_sequence(rng, n)
        a = sc.acf_naive(seq)
        b = sc.acf_bitparallel(seq)
        c = sc.acf_fft(seq)
        assert list(a.values) == list(b.values) == list(c.values)
        a.check_invariants()
        if n <= 64:
            assert list(a.values) == brute_profile(seq.elements())
        if n > 1:
            assert abs(int(a.values[n - 1])) == 1
            assert a.psl >= 1


def test_psl_requires_n_above_1():
    with pytest.raises(ValueError):
        sc.psl(sc.parse_sequence("+"))
    assert sc.psl(sc.parse_sequence("+-")) == 1
    assert sc.psl(sc.parse_sequence("-+")) == 1


# ------------------------------------------------------------- symmetries


def test_symmetry_transforms():
    rng = random.Random(4)
    for n in (2, 3, 8, 17, 50):
        seq = random_sequence(rng, n)
        base = sc.acf_naive(seq).values
        assert list(sc.acf_naive(sc.negate(seq)).values) == list(base)
        assert list(sc.acf_naive(sc.reverse(seq)).values) == list(base)
        alt = sc.acf_naive(sc.alternate(seq)).values
        assert all(
            int(alt[u]) == (-1) ** u * int(base[u]) for u in range(n)
        )
        if n > 1:
            m = sc.psl(seq)
            for image in (sc.negate(seq), sc.reverse(seq), sc.alternate(seq)):
                assert sc.psl(image) == m


def test_symmetry_involutions():
    seq = sc.parse_sequence("++-+---+")
    assert sc.negate(sc.negate(seq)) == seq
    assert sc.reverse(sc.reverse(seq)) == seq
    assert sc.alternate(sc.alternate(seq)) == seq


# ---------------------------------------------------- correlation measure


def brute_measure(elems, r):
    """Independent oracle: scan every (u_1 < ... < u_r, k) pair."""
    n = len(elems)
    best = -1
    witness = None
    for shifts in itertools.combinations(range(n), r):
        for k in range(n - shifts[-1] + 1):
            total = 0
            for j in range(k):
                prod = 1
                for u in shifts:
                    prod *= int(elems[j + u])
                total += prod
            if abs(total) > best:
                best = abs(total)
                witness = (shifts, k)
    return best, witness


def test_measure_all_ones_n3():
    res = sc.correlation_measure(sc.parse_sequence("+++"), 2)
    value, witness = brute_measure([1, 1, 1], 2)
    assert res.value == value == 2
    assert (res.shifts, res.k) == witness == ((0, 1), 2)


def test_measure_two_elements():
    res = sc.correlation_measure(sc.parse_sequence("+-"), 2)
    assert res.value == 1


def test_measure_matches_bruteforce():
    rng = random.Random(7)
    for n, r in [(5, 2), (8, 2), (10, 2), (6, 3), (8, 3), (5, 5)]:
        for _ in range(4):
            seq = random_sequence(rng, n)
            res = sc.correlation_measure(seq, r)
            value, witness = brute_measure(seq.elements(), r)
            assert res.value == value
            assert (res.shifts, res.k) == witness
            assert res.recompute(seq) == res.value


def test_measure_dominates_psl():
    rng = random.Random(11)
    for n in (3, 6, 12, 25, 40):
        seq = random_sequence(rng, n)
        assert sc.correlation_measure(seq, 2).value >= sc.psl(seq)


def test_measure_order_validation():
    seq = sc.parse_sequence("+++")
    with pytest.raises(ValueError):
        sc.correlation_measure(seq, 1)
    with pytest.raises(ValueError):
        sc.correlation_measure(seq, 4)


def test_measure_budget_refusal():
    seq = sc.BinarySequence(100, random.Random(0).getrandbits(100))
    with pytest.raises(sc.BudgetExceededError):
        sc.correlation_measure(seq, 3, budget=1000)
