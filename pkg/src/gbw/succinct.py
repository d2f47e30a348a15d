"""Static bit vectors with rank/select and directly addressable codes.

Positions and counts follow the usual 1-based conventions: ``rank(i)`` is
the number of ones among bits ``1..i``, ``select(j)`` the position of the
``j``-th one and ``access(i)`` the value of bit ``i``.

Bits are stored least-significant first within each byte.
"""

from __future__ import annotations

import bisect
from math import comb
from typing import Iterable

import numpy as np
from numba import njit

from .codecs.varint import decode_uvarint, encode_uvarint
from .errors import CodecError

PLAIN = "plain"
RRR = "rrr"

SAMPLE_BITS = 512
_SAMPLE_BYTES = SAMPLE_BITS // 8

BLOCK = 15
SUPERBLOCK = 32  # blocks per superblock

_POP8 = [bin(i).count("1") for i in range(256)]
_POP8_ARR = np.array(_POP8, dtype=np.int64)


def _as_bits(bits) -> np.ndarray:
    if isinstance(bits, str):
        bits = [int(ch) for ch in bits]
    arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
    if arr.size and arr.max() > 1:
        raise ValueError("bit vectors hold only 0 and 1")
    return arr.reshape(-1)


def _check_rank_index(i, n):
    if not 0 <= i <= n:
        raise IndexError(f"rank index {i} outside [0, {n}]")


class BitVector:
    """Rank/select structure; build with :func:`bv_build`."""

    representation: str

    def __len__(self):
        return self.n

    def rank(self, i: int) -> int:
        raise NotImplementedError

    def select(self, j: int) -> int:
        raise NotImplementedError

    def access(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise IndexError(f"access index {i} outside [1, {self.n}]")
        return self.rank(i) - self.rank(i - 1)

    def ones_between(self, lo: int, hi: int) -> list[int]:
        """Positions (1-based) of the ones in ``(lo, hi]``, ascending."""
        _check_rank_index(lo, self.n)
        _check_rank_index(hi, self.n)
        return [self.select(j) for j in range(self.rank(lo) + 1, self.rank(hi) + 1)]

    def _check_select(self, j):
        if not 1 <= j <= self.ones:
            raise IndexError(f"select({j}) with {self.ones} ones")

    def to_bits(self) -> np.ndarray:
        raise NotImplementedError

    def size_in_bits(self) -> int:
        raise NotImplementedError

    def to_bytes(self) -> bytes:
        raise NotImplementedError

    def __eq__(self, other):
        return (isinstance(other, BitVector) and self.n == other.n
                and np.array_equal(self.to_bits(), other.to_bits()))


@njit(cache=True)
def _select_in_bytes(buf, pop8, q, need):
    # 1-based position of the need-th one at or after byte q
    while pop8[buf[q]] < need:
        need -= pop8[buf[q]]
        q += 1
    byte = buf[q]
    for t in range(8):
        if byte >> t & 1:
            need -= 1
            if need == 0:
                return q * 8 + t + 1
    return -1


@njit(cache=True)
def _bytes_ones(buf, lo, hi, out):
    n = 0
    for q in range(lo >> 3, (hi + 7) >> 3):
        byte = buf[q]
        for t in range(8):
            if byte >> t & 1:
                pos = q * 8 + t + 1
                if lo < pos <= hi:
                    out[n] = pos
                    n += 1
    return n


class PlainBitVector(BitVector):
    """Uncompressed bits with absolute rank samples every 512 bits."""

    representation = PLAIN

    def __init__(self, bits):
        arr = _as_bits(bits)
        self.n = int(arr.size)
        self._buf = np.packbits(arr, bitorder="little").tobytes()
        self._init_samples()

    @classmethod
    def _from_packed(cls, n, buf):
        self = cls.__new__(cls)
        self.n = n
        self._buf = buf
        self._init_samples()
        return self

    def _init_samples(self):
        self._arr = np.frombuffer(self._buf, dtype=np.uint8)
        pops = np.array(_POP8, dtype=np.int64)[np.frombuffer(self._buf, dtype=np.uint8)]
        self.ones = int(pops.sum())
        per_block = np.add.reduceat(pops, np.arange(0, max(len(pops), 1), _SAMPLE_BYTES)) \
            if len(pops) else np.zeros(0, np.int64)
        self._samples = [0] + np.cumsum(per_block).tolist()

    def rank(self, i: int) -> int:
        _check_rank_index(i, self.n)
        k = i // SAMPLE_BITS
        q, r = divmod(i, 8)
        count = self._samples[k]
        count += int.from_bytes(self._buf[k * _SAMPLE_BYTES:q], "little").bit_count()
        if r:
            count += (self._buf[q] & ((1 << r) - 1)).bit_count()
        return count

    def access(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise IndexError(f"access index {i} outside [1, {self.n}]")
        p = i - 1
        return (self._buf[p >> 3] >> (p & 7)) & 1

    def ones_between(self, lo: int, hi: int) -> list[int]:
        _check_rank_index(lo, self.n)
        _check_rank_index(hi, self.n)
        if hi <= lo:
            return []
        out = np.empty(hi - lo, dtype=np.int64)
        return out[:_bytes_ones(self._arr, lo, hi, out)].tolist()

    def select(self, j: int) -> int:
        self._check_select(j)
        k = bisect.bisect_left(self._samples, j) - 1
        return _select_in_bytes(self._arr, _POP8_ARR, k * _SAMPLE_BYTES, j - self._samples[k])

    def to_bits(self) -> np.ndarray:
        arr = np.frombuffer(self._buf, dtype=np.uint8)
        return np.unpackbits(arr, bitorder="little")[: self.n]

    def size_in_bits(self) -> int:
        return 8 * len(self._buf) + 32 * len(self._samples)

    def to_bytes(self) -> bytes:
        return encode_uvarint(self.n) + self._buf

    @classmethod
    def from_bytes(cls, data, pos: int = 0) -> tuple["PlainBitVector", int]:
        n, pos = decode_uvarint(data, pos)
        end = pos + (n + 7) // 8
        if end > len(data):
            raise CodecError("truncated bit vector")
        buf = bytearray(data[pos:end])
        if n % 8:
            buf[-1] &= (1 << (n % 8)) - 1
        return cls._from_packed(n, bytes(buf)), end


def _rrr_tables():
    widths = [max(0, (comb(BLOCK, c) - 1).bit_length()) for c in range(BLOCK + 1)]
    values = np.arange(1 << BLOCK, dtype=np.int64)
    pops = np.array([bin(v).count("1") for v in range(1 << BLOCK)], dtype=np.int64)
    decode = []
    encode = np.zeros(1 << BLOCK, dtype=np.int64)
    for c in range(BLOCK + 1):
        members = values[pops == c]
        decode.append(members.tolist())
        encode[members] = np.arange(members.size)
    return widths, decode, encode, pops


_WIDTHS, _DECODE, _ENCODE, _POP15 = _rrr_tables()
_WIDTH_ARR = np.array(_WIDTHS, dtype=np.int64)
_DECODE_ARR = np.zeros((BLOCK + 1, max(len(d) for d in _DECODE)), dtype=np.int64)
for _c, _d in enumerate(_DECODE):
    _DECODE_ARR[_c, :len(_d)] = _d


@njit(cache=True)
def _rrr_walk(classes, widths, b, blk, rank, ptr):
    # advance from block b (with its rank and pointer) to block blk
    while b < blk:
        rank += classes[b]
        ptr += widths[classes[b]]
        b += 1
    return rank, ptr


@njit(cache=True)
def _rrr_ones(classes, off, widths, decode, blk, ptr, lo, hi, out):
    n = 0
    while blk * 15 < hi:
        c = classes[blk]
        if c:
            w = widths[c]
            q = ptr >> 3
            word = np.int64(off[q]) | np.int64(off[q + 1]) << 8 | np.int64(off[q + 2]) << 16
            v = decode[c, (word >> (ptr & 7)) & ((1 << w) - 1)]
            for t in range(15):
                if v >> t & 1:
                    pos = blk * 15 + t + 1
                    if lo < pos <= hi:
                        out[n] = pos
                        n += 1
            ptr += w
        blk += 1
    return n


def _pack_varwidth(values: np.ndarray, widths: np.ndarray) -> bytes:
    total = int(widths.sum())
    if total == 0:
        return b""
    starts = np.cumsum(widths) - widths
    owner = np.repeat(np.arange(values.size), widths)
    shift = np.arange(total) - starts[owner]
    bits = ((values[owner] >> shift) & 1).astype(np.uint8)
    return np.packbits(bits, bitorder="little").tobytes()


class RrrBitVector(BitVector):
    """Blocks of 15 bits stored as a 4-bit class plus an offset of
    ``ceil(log2 C(15, class))`` bits; cumulative ranks and offset pointers
    every 32 blocks."""

    representation = RRR

    def __init__(self, bits):
        arr = _as_bits(bits)
        n = int(arr.size)
        nblocks = -(-n // BLOCK)
        padded = np.zeros(nblocks * BLOCK, dtype=np.int64)
        padded[:n] = arr
        vals = (padded.reshape(nblocks, BLOCK) << np.arange(BLOCK)).sum(axis=1) \
            if nblocks else np.zeros(0, np.int64)
        classes = _POP15[vals]
        offsets = _ENCODE[vals]
        self._setup(n, classes, _pack_varwidth(offsets, _WIDTH_ARR[classes]))

    def _setup(self, n, classes, offset_buf):
        self.n = n
        self._classes = classes.astype(np.uint8)
        self._cls = self._classes.tolist()
        self._off = offset_buf + b"\x00\x00\x00"
        self._off_arr = np.frombuffer(self._off, dtype=np.uint8)
        self._offset_bytes = len(offset_buf)
        widths = _WIDTH_ARR[self._classes]
        nsuper = -(-len(self._cls) // SUPERBLOCK)
        cum_rank = np.concatenate([[0], np.cumsum(self._classes, dtype=np.int64)])
        cum_ptr = np.concatenate([[0], np.cumsum(widths)])
        idx = np.arange(nsuper + 1) * SUPERBLOCK
        idx = np.minimum(idx, len(self._cls))
        self._sr = cum_rank[idx].tolist()
        self._sp = cum_ptr[idx].tolist()
        self.ones = int(cum_rank[-1])

    def _block_value(self, c, ptr):
        w = _WIDTHS[c]
        if w == 0:
            return _DECODE[c][0]
        q, r = divmod(ptr, 8)
        off = (int.from_bytes(self._off[q:q + 3], "little") >> r) & ((1 << w) - 1)
        return _DECODE[c][off]

    def _walk(self, blk):
        # rank before block ``blk`` and the bit pointer of its offset
        s = blk // SUPERBLOCK
        return _rrr_walk(self._classes, _WIDTH_ARR, s * SUPERBLOCK, blk, self._sr[s], self._sp[s])

    def rank(self, i: int) -> int:
        _check_rank_index(i, self.n)
        blk, r = divmod(i, BLOCK)
        rank, ptr = self._walk(blk)
        if r:
            v = self._block_value(self._cls[blk], ptr)
            rank += (v & ((1 << r) - 1)).bit_count()
        return rank

    def access(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise IndexError(f"access index {i} outside [1, {self.n}]")
        blk, r = divmod(i - 1, BLOCK)
        c = self._cls[blk]
        if c == 0:
            return 0
        _, ptr = self._walk(blk)
        return (self._block_value(c, ptr) >> r) & 1

    def ones_between(self, lo: int, hi: int) -> list[int]:
        _check_rank_index(lo, self.n)
        _check_rank_index(hi, self.n)
        if hi <= lo:
            return []
        blk = lo // BLOCK
        _, ptr = self._walk(blk)
        out = np.empty(hi - lo, dtype=np.int64)
        n = _rrr_ones(self._classes, self._off_arr, _WIDTH_ARR, _DECODE_ARR, blk, ptr, lo, hi, out)
        return out[:n].tolist()

    def select(self, j: int) -> int:
        self._check_select(j)
        s = bisect.bisect_left(self._sr, j) - 1
        rank = self._sr[s]
        ptr = self._sp[s]
        b = s * SUPERBLOCK
        while rank + self._cls[b] < j:
            rank += self._cls[b]
            ptr += _WIDTHS[self._cls[b]]
            b += 1
        v = self._block_value(self._cls[b], ptr)
        need = j - rank
        for t in range(BLOCK):
            if v >> t & 1:
                need -= 1
                if need == 0:
                    return b * BLOCK + t + 1

    def to_bits(self) -> np.ndarray:
        widths = _WIDTH_ARR[self._classes]
        ptrs = np.cumsum(widths) - widths
        out = np.zeros(len(self._cls) * BLOCK, dtype=np.uint8)
        for b, (c, p) in enumerate(zip(self._cls, ptrs.tolist())):
            if c:
                v = self._block_value(c, p)
                for t in range(BLOCK):
                    out[b * BLOCK + t] = v >> t & 1
        return out[: self.n]

    def size_in_bits(self) -> int:
        return 4 * len(self._cls) + 8 * self._offset_bytes + 64 * len(self._sr)

    def to_bytes(self) -> bytes:
        cls = self._classes
        if cls.size % 2:
            cls = np.concatenate([cls, [0]]).astype(np.uint8)
        packed = (cls[0::2] | (cls[1::2] << 4)).astype(np.uint8).tobytes()
        return (encode_uvarint(self.n) + packed
                + encode_uvarint(self._offset_bytes) + self._off[:self._offset_bytes])

    @classmethod
    def from_bytes(cls, data, pos: int = 0) -> tuple["RrrBitVector", int]:
        n, pos = decode_uvarint(data, pos)
        nblocks = -(-n // BLOCK)
        end = pos + (nblocks + 1) // 2
        if end > len(data):
            raise CodecError("truncated RRR classes")
        packed = np.frombuffer(bytes(data[pos:end]), dtype=np.uint8)
        classes = np.empty(packed.size * 2, dtype=np.uint8)
        classes[0::2] = packed & 0x0F
        classes[1::2] = packed >> 4
        classes = classes[:nblocks]
        if classes.size and classes.max() > BLOCK:
            raise CodecError("invalid RRR class")
        m, pos = decode_uvarint(data, end)
        if pos + m > len(data):
            raise CodecError("truncated RRR offsets")
        self = cls.__new__(cls)
        self._setup(n, classes, bytes(data[pos:pos + m]))
        return self, pos + m


def bv_build(bits: Iterable[int], representation: str = PLAIN) -> BitVector:
    if representation == PLAIN:
        return PlainBitVector(bits)
    if representation == RRR:
        return RrrBitVector(bits)
    raise ValueError(f"unknown representation {representation!r}")


def bv_rank(v: BitVector, i: int) -> int:
    return v.rank(i)


def bv_select(v: BitVector, i: int) -> int:
    return v.select(i)


def bv_access(v: BitVector, i: int) -> int:
    return v.access(i)


def _pack_fixed(values: np.ndarray, width: int) -> bytes:
    if values.size == 0:
        return b""
    bits = ((values[:, None] >> np.arange(width)) & 1).astype(np.uint8).reshape(-1)
    return np.packbits(bits, bitorder="little").tobytes()


def _unpack_fixed(buf: bytes, count: int, width: int) -> np.ndarray:
    bits = np.unpackbits(np.frombuffer(buf, dtype=np.uint8), bitorder="little")
    bits = bits[: count * width].reshape(count, width).astype(np.int64)
    return (bits << np.arange(width)).sum(axis=1)


class DacArray:
    """Directly addressable codes: level ``l`` holds the ``l``-th
    ``width``-bit chunk of every value that has one, and a continuation
    bit vector marks values that go on to the next level.

    Indexing is 0-based like any Python sequence.
    """

    def __init__(self, values: Iterable[int], width: int = 4):
        if not 1 <= width <= 16:
            raise ValueError("DAC chunk width must lie in [1, 16]")
        vals = np.asarray(list(values) if not isinstance(values, np.ndarray) else values,
                          dtype=np.int64)
        if vals.size and vals.min() < 0:
            raise ValueError("DAC values must be non-negative")
        self.width = width
        self.n = int(vals.size)
        mask = (1 << width) - 1
        self.chunks: list[np.ndarray] = []
        self.continuation: list[PlainBitVector] = []
        while True:
            self.chunks.append(vals & mask)
            rest = vals >> width
            more = rest > 0
            if not more.any():
                break
            self.continuation.append(PlainBitVector(more.astype(np.uint8)))
            vals = rest[more]
        self._levels = [c.tolist() for c in self.chunks]

    def __len__(self):
        return self.n

    def __getitem__(self, n: int) -> int:
        if not 0 <= n < self.n:
            raise IndexError(f"DAC index {n} outside [0, {self.n})")
        value = 0
        shift = 0
        for level, chunk in enumerate(self._levels):
            value |= chunk[n] << shift
            if level == len(self.continuation) or not self.continuation[level].access(n + 1):
                return value
            n = self.continuation[level].rank(n + 1) - 1
            shift += self.width

    def get(self, n: int) -> int:
        return self[n]

    def slice(self, start: int, stop: int) -> list[int]:
        if not 0 <= start <= stop <= self.n:
            raise IndexError(f"DAC slice [{start}, {stop}) outside [0, {self.n}]")
        values = self._levels[0][start:stop]
        # the values of a range that continue form a range of the next level
        members = range(len(values))
        lo, hi = start, stop
        shift = 0
        for level, cont in enumerate(self.continuation):
            ones = cont.ones_between(lo, hi)
            if not ones:
                break
            members = [members[p - 1 - lo] for p in ones]
            lo = cont.rank(lo)
            hi = lo + len(ones)
            shift += self.width
            chunk = self._levels[level + 1]
            for t, v in enumerate(members):
                values[v] |= chunk[lo + t] << shift
        return values

    def to_list(self) -> list[int]:
        """All values, decoded level by level."""
        if self.n == 0:
            return []
        out = self.chunks[-1].copy()
        for level in range(len(self.continuation) - 1, -1, -1):
            more = self.continuation[level].to_bits().astype(bool)
            full = self.chunks[level].copy()
            full[more] |= out << self.width
            out = full
        return out.tolist()

    def size_in_bits(self) -> int:
        return (sum(c.size * self.width for c in self.chunks)
                + sum(b.size_in_bits() for b in self.continuation))

    def to_bytes(self) -> bytes:
        out = [encode_uvarint(self.width), encode_uvarint(len(self.chunks))]
        for level, chunk in enumerate(self.chunks):
            out.append(encode_uvarint(chunk.size))
            out.append(_pack_fixed(chunk, self.width))
            if level < len(self.continuation):
                out.append(self.continuation[level]._buf)
        return b"".join(out)

    @classmethod
    def from_bytes(cls, data, pos: int = 0) -> tuple["DacArray", int]:
        width, pos = decode_uvarint(data, pos)
        nlevels, pos = decode_uvarint(data, pos)
        if not 1 <= width <= 16 or nlevels < 1:
            raise CodecError("invalid DAC header")
        self = cls.__new__(cls)
        self.width = width
        self.chunks = []
        self.continuation = []
        expected = None
        for level in range(nlevels):
            count, pos = decode_uvarint(data, pos)
            if expected is not None and count != expected:
                raise CodecError("DAC level size disagrees with continuation bits")
            end = pos + (count * width + 7) // 8
            if end > len(data):
                raise CodecError("truncated DAC level")
            self.chunks.append(_unpack_fixed(bytes(data[pos:end]), count, width))
            pos = end
            if level < nlevels - 1:
                end = pos + (count + 7) // 8
                if end > len(data):
                    raise CodecError("truncated DAC continuation bits")
                bv = PlainBitVector._from_packed(count, bytes(data[pos:end]))
                self.continuation.append(bv)
                expected = bv.ones
                pos = end
        self.n = int(self.chunks[0].size)
        self._levels = [c.tolist() for c in self.chunks]
        return self, pos


def dac_build(values: Iterable[int], chunk_width: int = 4) -> DacArray:
    return DacArray(values, chunk_width)


def dac_get(d: DacArray, n: int) -> int:
    return d[n]
