"""Static tabled-ANS baselines over exact frequencies.

The table size equals the token count (no power-of-two quantization), so the
slot population is exactly the frequency census. Three spread strategies are
offered: contiguous blocks in dictionary order (ranged), a priority-queue
interleave that spaces each symbol's slots evenly (uniform), and the reversed
text itself as the table (text_order). All three share the coding loop; they
differ only in where each symbol's slots sit.

Keys in the uniform queue are the exact rationals (2k+1)/(2*count); they are
compared by cross-multiplication, never as floats, with ties going to the
smaller dictionary index. The text_order spread exists for size and timing
comparisons: its table is the reversed input, so it cannot be rebuilt from an
archive alone.
"""

from __future__ import annotations

import enum
import heapq
from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass

from .bitio import EXPANDED_BITS, BitStack, read_varint, write_varint
from .errors import (
    CorruptError,
    EmptyInputError,
    EmptyStackError,
    TrailingBytes,
)


@dataclass
class StaticFrequencies:
    """Exact occurrence counts; total doubles as the table size."""

    counts: dict[bytes, int]
    total: int

    def __post_init__(self):
        if any(c <= 0 for c in self.counts.values()):
            raise ValueError("frequencies must be positive")
        if sum(self.counts.values()) != self.total:
            raise ValueError("frequencies do not sum to the total")


def count_frequencies(tokens: list[bytes], dictionary: list[bytes]) -> StaticFrequencies:
    counts = Counter(tokens)
    if set(counts) != set(dictionary):
        raise ValueError("dictionary does not match the token stream")
    return StaticFrequencies(dict(counts), len(tokens))


class SpreadStrategy(enum.Enum):
    RANGED = "ranged"
    UNIFORM = "uniform"
    TEXT_ORDER = "textorder"


@dataclass
class SpreadTable:
    """Slot assignment: spread[j] is the symbol owning slot j."""

    spread: list
    slots: dict


class _SlotKey:
    """Heap entry for the uniform spread: the rational num/den plus order."""

    __slots__ = ("num", "den", "order")

    def __init__(self, num, den, order):
        self.num = num
        self.den = den
        self.order = order

    def __lt__(self, other):
        a = self.num * other.den
        b = other.num * self.den
        if a != b:
            return a < b
        return self.order < other.order


def _ranged_spread(pairs):
    spread = []
    slots = {}
    start = 0
    for sym, count in pairs:
        slots[sym] = list(range(start, start + count))
        spread.extend([sym] * count)
        start += count
    return SpreadTable(spread, slots)


def _uniform_spread(pairs):
    total = sum(c for _, c in pairs)
    symbols = [sym for sym, _ in pairs]
    heap = [_SlotKey(1, c + c, i) for i, (_, c) in enumerate(pairs)]
    heapq.heapify(heap)
    spread = [None] * total
    slots = {sym: [] for sym in symbols}
    for j in range(total):
        key = heap[0]
        sym = symbols[key.order]
        spread[j] = sym
        slots[sym].append(j)
        if key.num + 2 < key.den:
            key.num += 2
            heapq.heapreplace(heap, key)
        else:
            heapq.heappop(heap)
    return SpreadTable(spread, slots)


def _text_order_spread(tokens):
    spread = list(tokens)
    spread.reverse()
    slots = {}
    for j, sym in enumerate(spread):
        slots.setdefault(sym, []).append(j)
    return SpreadTable(spread, slots)


def build_spread(
    strategy: SpreadStrategy,
    freqs: StaticFrequencies,
    dictionary: list[bytes],
    tokens: list[bytes] | None = None,
) -> SpreadTable:
    """Assign table slots to symbols; table size is freqs.total."""
    if freqs.total == 0:
        raise EmptyInputError("cannot build a spread over zero tokens")
    if strategy is SpreadStrategy.TEXT_ORDER:
        if tokens is None:
            raise ValueError("text_order spread needs the token stream")
        return _text_order_spread(tokens)
    pairs = [(t, freqs.counts[t]) for t in dictionary]
    if strategy is SpreadStrategy.RANGED:
        return _ranged_spread(pairs)
    if strategy is SpreadStrategy.UNIFORM:
        return _uniform_spread(pairs)
    raise ValueError(f"unknown spread strategy: {strategy!r}")


def _encode_core(seq, counts, slots, total) -> tuple[bytearray, int]:
    """Shared coding loop; counts/slots may be dicts (tokens) or lists (ids)."""
    x = total
    bits = bytearray()
    expand = EXPANDED_BITS
    for s in seq:
        c = counts[s]
        threshold = c + c
        if x >= threshold:
            # Emit the low bits that bring x under 2*c, LSB first, batched
            # through the expansion table instead of a per-bit loop.
            shift = x.bit_length() - c.bit_length() - 1
            if shift < 0:
                shift = 0
            if (x >> shift) >= threshold:
                shift += 1
            low = x & ((1 << shift) - 1)
            x >>= shift
            while shift >= 8:
                bits += expand[8][low & 255]
                low >>= 8
                shift -= 8
            if shift:
                bits += expand[shift][low]
        x = total + slots[s][x - c]
    return bits, x


def _decode_core(code: BitStack, final_state, spread, counts, slots, n, total):
    if not total <= final_state < 2 * total:
        raise CorruptError("final state outside the table range")
    x = final_state
    out = []
    emit = out.append
    pop = code.pop
    try:
        for _ in range(n):
            j = x - total
            s = spread[j]
            emit(s)
            x = counts[s] + bisect_left(slots[s], j)
            while x < total:
                x = x + x + pop()
    except EmptyStackError:
        raise CorruptError("code bits exhausted mid-decode") from None
    if x != total:
        raise CorruptError("state did not drain to the table size")
    if len(code):
        raise CorruptError("unconsumed code bits after decode")
    out.reverse()
    return out


def static_encode(
    tokens: list[bytes], table: SpreadTable | None, freqs: StaticFrequencies | None
) -> tuple[BitStack, int]:
    """Encode with a fixed table; returns (code bits, final state).

    Empty input needs no table and yields final state 0 as a sentinel.
    """
    if not tokens:
        return BitStack(), 0
    if table is None or freqs is None:
        raise ValueError("nonempty input needs a spread table and frequencies")
    if freqs.total != len(tokens):
        raise ValueError("frequency total does not match the token count")
    bits, x = _encode_core(tokens, freqs.counts, table.slots, freqs.total)
    return BitStack(bits), x


def static_decode(
    code: BitStack,
    final_state: int,
    table: SpreadTable | None,
    freqs: StaticFrequencies | None,
    n: int,
) -> list[bytes]:
    """Decode n tokens; consumes (and must empty) the code stack."""
    if n == 0:
        if final_state != 0 or len(code):
            raise CorruptError("empty stream with leftover state or bits")
        return []
    if table is None or freqs is None:
        raise ValueError("nonempty stream needs a spread table and frequencies")
    if freqs.total != n:
        raise CorruptError("frequency total does not match the token count")
    return _decode_core(code, final_state, table.spread, freqs.counts, table.slots, n, n)


def serialize_frequencies(freqs: StaticFrequencies, dictionary: list[bytes]) -> bytes:
    """Varint counts in dictionary order."""
    return b"".join(write_varint(freqs.counts[t]) for t in dictionary)


def deserialize_frequencies(data: bytes, dictionary: list[bytes]) -> StaticFrequencies:
    counts = {}
    pos = 0
    for tok in dictionary:
        value, used = read_varint(data, pos)
        if value == 0:
            raise CorruptError("zero frequency for a dictionary token")
        counts[tok] = value
        pos += used
    if pos != len(data):
        raise TrailingBytes("frequency section has extra bytes")
    return StaticFrequencies(counts, sum(counts.values()))
