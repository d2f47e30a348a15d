"""Canonical Huffman coding over dense integer alphabets.

Codebooks are described by code lengths alone (0 = symbol absent); codes
are assigned canonically by ``(length, symbol)``.  Bit streams are packed
most-significant-bit first and zero padded to a whole byte.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from numba import njit

from ..errors import CodecError

# decoding works on 64-bit words; reaching 64 would need a total count
# beyond Fibonacci(65), about 1.7e13
MAX_CODE_LENGTH = 63


@dataclass(frozen=True)
class HuffmanCodebook:
    lengths: tuple[int, ...]
    codes: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        lengths = tuple(map(int, self.lengths))
        if lengths and (min(lengths) < 0 or max(lengths) > MAX_CODE_LENGTH):
            raise CodecError("code length out of range")
        object.__setattr__(self, "lengths", lengths)
        # exact Kraft check in integers
        if sum(1 << (MAX_CODE_LENGTH - l) for l in lengths if l) > 1 << MAX_CODE_LENGTH:
            raise CodecError("code lengths violate the Kraft inequality")
        object.__setattr__(self, "codes", _canonical_codes(lengths))

    @property
    def size(self) -> int:
        return len(self.lengths)

    def bit_strings(self) -> list[str]:
        return [format(c, f"0{l}b") if l else "" for c, l in zip(self.codes, self.lengths)]

    def encoded_bits(self, counts: Sequence[int]) -> int:
        return sum(c * l for c, l in zip(counts, self.lengths))


def kraft_sum(lengths: Iterable[int]) -> float:
    return sum(2.0 ** -l for l in lengths if l)


def _canonical_codes(lengths: Sequence[int]) -> tuple[int, ...]:
    order = sorted((l, s) for s, l in enumerate(lengths) if l)
    codes = [0] * len(lengths)
    code = 0
    prev = 0
    for l, s in order:
        code <<= l - prev
        codes[s] = code
        code += 1
        prev = l
    return tuple(codes)


def huffman_lengths(freqs: Sequence[int]) -> list[int]:
    """Optimal prefix-code lengths; a lone symbol gets a 1-bit code."""
    live = [(int(f), s) for s, f in enumerate(freqs) if f > 0]
    if not live:
        raise CodecError("cannot build a Huffman code for an empty alphabet")
    lengths = [0] * len(freqs)
    if len(live) == 1:
        lengths[live[0][1]] = 1
        return lengths
    # heap items: (weight, tiebreak, symbols in subtree); ties resolve by age
    heap = [(f, s, [s]) for f, s in live]
    heapq.heapify(heap)
    tick = len(freqs)
    while len(heap) > 1:
        f1, _, a = heapq.heappop(heap)
        f2, _, b = heapq.heappop(heap)
        for s in a:
            lengths[s] += 1
        for s in b:
            lengths[s] += 1
        if len(a) < len(b):
            a, b = b, a
        a.extend(b)
        heapq.heappush(heap, (f1 + f2, tick, a))
        tick += 1
    return lengths


def huffman_build(freqs: Sequence[int]) -> HuffmanCodebook:
    return HuffmanCodebook(tuple(huffman_lengths(freqs)))


def huffman_encode(codebook: HuffmanCodebook, symbols: Iterable[int]) -> bytes:
    table = codebook.bit_strings()
    try:
        pieces = [table[s] for s in symbols]
    except (IndexError, TypeError):
        raise CodecError("symbol outside the codebook alphabet") from None
    if any(not p for p in pieces):
        raise CodecError("symbol has no code in this codebook")
    return pack_bits("".join(pieces))


def pack_bits(bits: str) -> bytes:
    if not bits:
        return b""
    pad = -len(bits) % 8
    bits += "0" * pad
    return int(bits, 2).to_bytes(len(bits) // 8, "big")


def unpack_bits(data: bytes) -> list[int]:
    return np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8)).tolist()


def _decoder_tables(codebooks: Sequence[HuffmanCodebook]):
    """Canonical decoding tables, stacked for every codebook: first code,
    number of codes and symbol offset per length."""
    maxlen = max((max(cb.lengths, default=0) for cb in codebooks), default=0)
    k = len(codebooks)
    first = np.zeros((k, maxlen + 2), np.int64)
    count = np.zeros((k, maxlen + 2), np.int64)
    offset = np.zeros((k, maxlen + 2), np.int64)
    symbols = []
    base = np.zeros(k, np.int64)
    for c, cb in enumerate(codebooks):
        base[c] = len(symbols)
        order = [s for _, s in sorted((l, s) for s, l in enumerate(cb.lengths) if l)]
        per_length = [0] * (maxlen + 2)
        for l in cb.lengths:
            per_length[l] += 1
        per_length[0] = 0
        idx = 0
        for l in range(1, maxlen + 1):
            n = per_length[l]
            count[c, l] = n
            offset[c, l] = idx
            if n:
                first[c, l] = cb.codes[order[idx]]
            idx += n
        symbols.extend(order)
    return first, count, offset, np.array(symbols, dtype=np.int64), base


@njit(cache=True)
def _decode_kernel(data, count, pos, first, cnt, offset, symbols, base):
    out = np.zeros(count, np.int64)
    nbits = data.shape[0] * 8
    ncb = first.shape[0]
    maxlen = first.shape[1] - 2
    for k in range(count):
        c = k % ncb
        code = 0
        l = 0
        while True:
            if pos >= nbits:
                return out, pos, 1
            code = (code << 1) | ((data[pos >> 3] >> (7 - (pos & 7))) & 1)
            pos += 1
            l += 1
            if l > maxlen:
                return out, pos, 2
            rel = code - first[c, l]
            if rel >= 0 and rel < cnt[c, l]:
                out[k] = symbols[base[c] + offset[c, l] + rel]
                break
    return out, pos, 0


def huffman_decode(codebook: HuffmanCodebook, data: bytes, count: int) -> list[int]:
    """Decode ``count`` symbols from a packed stream."""
    return huffman_decode_at([codebook], data, count)[0]


def huffman_decode_at(codebooks: Sequence[HuffmanCodebook], data: bytes, count: int,
                      pos: int = 0) -> tuple[list[int], int]:
    """Decode ``count`` symbols cycling through ``codebooks`` in turn,
    starting at bit ``pos``.

    Returns the symbols and the bit position after the last one.
    """
    if count == 0:
        return [], pos
    arr = np.frombuffer(bytes(data), dtype=np.uint8)
    out, pos, err = _decode_kernel(arr, count, pos, *_decoder_tables(codebooks))
    if err == 1:
        raise CodecError("truncated Huffman stream")
    if err == 2:
        raise CodecError("invalid Huffman code")
    return out.tolist(), int(pos)


def encode_interleaved(codebooks: Sequence[HuffmanCodebook], symbols: Sequence[int]) -> bytes:
    tables = [cb.bit_strings() for cb in codebooks]
    n = len(tables)
    try:
        pieces = [tables[k % n][s] for k, s in enumerate(symbols)]
    except IndexError:
        raise CodecError("symbol outside the codebook alphabet") from None
    if any(not p for p in pieces):
        raise CodecError("symbol has no code in this codebook")
    return pack_bits("".join(pieces))
