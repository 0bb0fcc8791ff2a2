"""Binary sequences and their aperiodic autocorrelations.

A sequence is an element of {-1,+1}^n, stored bit-packed: bit j of the
packed integer is 1 when element j is +1 and 0 when it is -1, with
element 0 in the least significant bit of word 0.

Three interchangeable routines compute the full correlation profile
(C_0, ..., C_{n-1}) where C_u = sum_{j=0}^{n-u-1} a_j a_{j+u}:

* ``acf_naive``       -- direct summation, the reference path.
* ``acf_bitparallel`` -- XOR + popcount on the packed words.
* ``acf_fft``         -- zero-padded fast convolution, rounded back to
  integers and repaired against the parity/range invariants, so its
  output contract is exact.

The peak sidelobe level M(A) = max_{0<u<n} |C_u| and the r-th order
correlation measure S_r are derived from the same profile machinery.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "BinarySequence",
    "CorrelationProfile",
    "CorrelationMeasureResult",
    "SequenceParseError",
    "BudgetExceededError",
    "parse_sequence",
    "acf_naive",
    "acf_bitparallel",
    "acf_fft",
    "psl",
    "correlation_measure",
    "negate",
    "reverse",
    "alternate",
    "read_sequence_lines",
    "sequence_to_bytes",
    "sequence_from_bytes",
]

# Refusal threshold for correlation_measure, as estimated elementary
# operations C(n, r) * (n - r).
DEFAULT_MEASURE_BUDGET = 200_000_000


class SequenceParseError(ValueError):
    """Invalid sequence text.  ``position`` is 1-based within the input."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class BudgetExceededError(RuntimeError):
    """An enumeration or search was refused because it exceeds its budget."""


class BinarySequence:
    """Immutable {-1,+1} sequence of length ``n``, bit-packed.

    Bit j of ``bits`` is 1 for +1 and 0 for -1; element 0 sits in the
    least significant bit.
    """

    __slots__ = ("n", "bits")

    def __init__(self, n: int, bits: int):
        if n < 1:
            raise ValueError(f"sequence length must be >= 1, got {n}")
        if bits < 0 or bits >> n:
            raise ValueError("packed bits do not fit the stated length")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, name, value):
        raise AttributeError("BinarySequence is immutable")

    @classmethod
    def from_elements(cls, elements) -> "BinarySequence":
        bits = 0
        n = 0
        for j, e in enumerate(elements):
            if e == 1:
                bits |= 1 << j
            elif e != -1:
                raise ValueError(f"element {j} is {e!r}, expected +1 or -1")
            n = j + 1
        if n == 0:
            raise ValueError("empty sequence")
        return cls(n, bits)

    def elements(self) -> np.ndarray:
        """The sequence as an int8 array of +1/-1 values."""
        nbytes = (self.n + 7) // 8
        raw = np.frombuffer(self.bits.to_bytes(nbytes, "little"), dtype=np.uint8)
        bits = np.unpackbits(raw, bitorder="little")[: self.n]
        return (bits.astype(np.int8) << 1) - 1

    def words(self) -> np.ndarray:
        """Packed 64-bit words, element 0 in the LSB of word 0."""
        nwords = (self.n + 63) // 64
        return np.frombuffer(
            self.bits.to_bytes(nwords * 8, "little"), dtype=np.uint64
        ).copy()

    def render(self, encoding: str = "plusminus") -> str:
        if encoding == "plusminus":
            one, zero = "+", "-"
        elif encoding == "binary01":
            one, zero = "1", "0"
        else:
            raise ValueError(f"unknown encoding {encoding!r}")
        b = self.bits
        return "".join(one if (b >> j) & 1 else zero for j in range(self.n))

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BinarySequence)
            and self.n == other.n
            and self.bits == other.bits
        )

    def __hash__(self) -> int:
        return hash((self.n, self.bits))

    def __repr__(self) -> str:
        if self.n <= 64:
            return f"BinarySequence({self.render()!r})"
        return f"BinarySequence(n={self.n}, bits=0x{self.bits:x})"


_ENCODINGS = {
    "plusminus": {"+": 1, "-": 0},
    "binary01": {"1": 1, "0": 0},
}


def parse_sequence(text: str, encoding: str = "plusminus") -> BinarySequence:
    """Parse sequence text; whitespace is ignored.

    Raises :class:`SequenceParseError` with the 1-based position of the
    first invalid character, or on empty input.
    """
    try:
        table = _ENCODINGS[encoding]
    except KeyError:
        raise ValueError(f"unknown encoding {encoding!r}") from None
    bits = 0
    n = 0
    for pos, ch in enumerate(text, start=1):
        if ch.isspace():
            continue
        try:
            bit = table[ch]
        except KeyError:
            raise SequenceParseError(
                f"invalid character {ch!r} at position {pos}", position=pos
            ) from None
        bits |= bit << n
        n += 1
    if n == 0:
        raise SequenceParseError("empty sequence input")
    return BinarySequence(n, bits)


def detect_encoding(text: str) -> str:
    """Guess the text encoding from the characters present."""
    stripped = set(text) - set(" \t\r\n")
    if stripped <= {"+", "-"}:
        return "plusminus"
    if stripped <= {"0", "1"}:
        return "binary01"
    return "plusminus" if ("+" in stripped or "-" in stripped) else "binary01"


def read_sequence_lines(lines, encoding: str | None = None):
    """Yield (line_number, BinarySequence) from text lines.

    Blank lines and lines starting with '#' are skipped.  With
    ``encoding=None`` each line's encoding is auto-detected.
    """
    for lineno, line in enumerate(lines, start=1):
        body = line.strip()
        if not body or body.startswith("#"):
            continue
        enc = encoding or detect_encoding(body)
        try:
            yield lineno, parse_sequence(body, enc)
        except SequenceParseError as exc:
            raise SequenceParseError(
                f"line {lineno}: {exc}", position=exc.position
            ) from None


def sequence_to_bytes(seq: BinarySequence) -> bytes:
    """Binary record: u64 word count, u64 length n, packed words (LE)."""
    nwords = (seq.n + 63) // 64
    head = nwords.to_bytes(8, "little") + seq.n.to_bytes(8, "little")
    return head + seq.bits.to_bytes(nwords * 8, "little")


def sequence_from_bytes(buf: bytes, offset: int = 0):
    """Decode one binary record, returning (sequence, next_offset)."""
    if len(buf) - offset < 16:
        raise ValueError("truncated sequence record header")
    nwords = int.from_bytes(buf[offset : offset + 8], "little")
    n = int.from_bytes(buf[offset + 8 : offset + 16], "little")
    if nwords != (n + 63) // 64:
        raise ValueError(f"word count {nwords} inconsistent with length {n}")
    end = offset + 16 + nwords * 8
    if len(buf) < end:
        raise ValueError("truncated sequence record payload")
    bits = int.from_bytes(buf[offset + 16 : end], "little")
    if bits >> n:
        raise ValueError("nonzero trailing bits in packed words")
    return BinarySequence(n, bits), end


@dataclass(frozen=True)
class CorrelationProfile:
    """Full autocorrelation vector plus the derived peak sidelobe level.

    ``psl`` is None for n = 1, where no nonzero shift exists.
    ``corrected_shifts`` is nonempty only when the FFT path had to
    recompute a shift exactly after an invariant violation.
    """

    n: int
    values: np.ndarray
    psl: int | None
    corrected_shifts: tuple = ()

    def check_invariants(self) -> None:
        v = self.values
        n = self.n
        if v[0] != n:
            raise AssertionError(f"C_0 = {v[0]} != n = {n}")
        u = np.arange(n)
        if np.any(np.abs(v) > n - u):
            raise AssertionError("|C_u| > n - u for some shift")
        if np.any((v - (n - u)) & 1):
            raise AssertionError("C_u parity differs from n - u")
        if n > 1 and self.psl != int(np.max(np.abs(v[1:]))):
            raise AssertionError("stored psl does not match values")


def _profile(n: int, values: np.ndarray, corrected=()) -> CorrelationProfile:
    p = int(np.max(np.abs(values[1:]))) if n > 1 else None
    return CorrelationProfile(n, values, p, tuple(corrected))


def acf_naive(seq: BinarySequence) -> CorrelationProfile:
    """Correlation profile by direct summation."""
    x = seq.elements().astype(np.int64)
    values = np.correlate(x, x, mode="full")[seq.n - 1 :]
    return _profile(seq.n, values)


def acf_bitparallel(seq: BinarySequence) -> CorrelationProfile:
    """Correlation profile via XOR + popcount on the packed bits.

    C_u = (n-u) - 2 * popcount((b ^ (b >> u)) masked to n-u bits):
    disagreeing positions contribute -1 products, agreeing ones +1.
    """
    n = seq.n
    b = seq.bits
    values = np.empty(n, dtype=np.int64)
    values[0] = n
    for u in range(1, n):
        m = n - u
        d = (b ^ (b >> u)) & ((1 << m) - 1)
        values[u] = m - 2 * d.bit_count()
    return _profile(n, values)


def acf_fft(seq: BinarySequence) -> CorrelationProfile:
    """Correlation profile via zero-padded FFT, repaired to exactness.

    Rounded values violating |C_u| <= n-u or C_u == n-u (mod 2) are
    recomputed by direct summation and recorded in corrected_shifts.
    """
    n = seq.n
    x = seq.elements().astype(np.float64)
    size = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(x, size)
    raw = np.fft.irfft(f * f.conj(), size)[:n]
    values = np.rint(raw).astype(np.int64)
    u = np.arange(n)
    bad = (np.abs(values) > n - u) | (((values - (n - u)) & 1) != 0)
    corrected = []
    if bad.any():
        xi = x.astype(np.int64)
        for ui in np.nonzero(bad)[0]:
            ui = int(ui)
            values[ui] = int(np.dot(xi[: n - ui], xi[ui:]))
            corrected.append(ui)
    return _profile(n, values, corrected)


_ACF_PATHS = {
    "naive": acf_naive,
    "bitparallel": acf_bitparallel,
    "fft": acf_fft,
}


def acf(seq: BinarySequence, path: str = "bitparallel") -> CorrelationProfile:
    try:
        return _ACF_PATHS[path](seq)
    except KeyError:
        raise ValueError(f"unknown acf path {path!r}") from None


def psl(seq: BinarySequence) -> int:
    """Peak sidelobe level max_{0<u<n} |C_u|; undefined for n <= 1."""
    if seq.n <= 1:
        raise ValueError("peak sidelobe level is undefined for length 1")
    return acf_bitparallel(seq).psl


def negate(seq: BinarySequence) -> BinarySequence:
    """a_j -> -a_j.  Leaves the whole correlation profile fixed."""
    mask = (1 << seq.n) - 1
    return BinarySequence(seq.n, seq.bits ^ mask)


def reverse(seq: BinarySequence) -> BinarySequence:
    """a_j -> a_{n-1-j}.  Leaves the whole correlation profile fixed."""
    b = seq.bits
    out = 0
    for _ in range(seq.n):
        out = (out << 1) | (b & 1)
        b >>= 1
    return BinarySequence(seq.n, out)


def alternate(seq: BinarySequence) -> BinarySequence:
    """a_j -> (-1)^j a_j.  Maps C_u -> (-1)^u C_u, so |C_u| is fixed."""
    # flip bits at odd positions: ...0101 pattern repeated
    mask = 0
    for j in range(1, seq.n, 2):
        mask |= 1 << j
    return BinarySequence(seq.n, seq.bits ^ mask)


@dataclass(frozen=True)
class CorrelationMeasureResult:
    """Value of S_r with the lexicographically smallest maximizing witness."""

    r: int
    value: int
    shifts: tuple
    k: int

    def recompute(self, seq: BinarySequence) -> int:
        """Re-evaluate |partial sum| at the stored witness."""
        a = seq.elements().astype(np.int64)
        total = 0
        for j in range(self.k):
            prod = 1
            for u in self.shifts:
                prod *= a[j + u]
            total += prod
        return abs(int(total))


def measure_cost(n: int, r: int) -> int:
    """Work estimate for S_r: shift tuples times overlap length."""
    from math import comb

    return comb(n, r) * max(1, n - r)


def correlation_measure(
    seq: BinarySequence, r: int, budget: int = DEFAULT_MEASURE_BUDGET
) -> CorrelationMeasureResult:
    """r-th order correlation measure S_r.

    S_r = max over 0 <= u_1 < ... < u_r < n and 0 <= k <= n - u_r of
    |sum_{j<k} a_{j+u_1} ... a_{j+u_r}|.  Ties resolve to the
    lexicographically smallest (u_1, ..., u_r, k); that tie rule is a
    local convention.  Cost grows like C(n, r) * n, so calls above
    ``budget`` estimated operations are refused.
    """
    n = seq.n
    if r < 2 or r > n:
        raise ValueError(f"order r must satisfy 2 <= r <= n, got r={r}")
    cost = measure_cost(n, r)
    if cost > budget:
        raise BudgetExceededError(
            f"S_{r} at n={n} needs ~{cost:.3g} operations, budget is {budget:.3g}"
        )
    a = seq.elements().astype(np.int64)
    best = -1
    best_witness = None
    for shifts in itertools.combinations(range(n), r):
        span = n - shifts[-1]
        prod = a[shifts[0] : shifts[0] + span].copy()
        for u in shifts[1:]:
            prod *= a[u : u + span]
        prefix = np.cumsum(prod)
        kmax = int(np.argmax(np.abs(prefix)))
        val = abs(int(prefix[kmax]))
        if val > best:
            best = val
            best_witness = (shifts, kmax + 1)
    return CorrelationMeasureResult(
        r=r, value=best, shifts=best_witness[0], k=best_witness[1]
    )
