"""Searchable 2LCAB: byte-oriented dense codes instead of Huffman.

Every dictionary is sorted by frequency so that an item's position is its
rank and its codeword follows from the rank alone.  Shift positions are a
bit vector over the bytes of the encoded biword stream, marking the final
byte of each biword with a shift; offsets live in a DAC array, and a
second bit vector marks where each offset array starts when some biword
has a complex shift.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..biwords import EOS, EOS_TOKEN, Biword, ShiftClass, classify_shift
from ..codecs.etdc import code_table, codeword_ends, etdc_decode_all
from ..codecs.varint import ByteReader, encode_uvarint
from ..errors import CodecError, CorruptArchiveError
from ..succinct import PLAIN, RRR, BitVector, DacArray, PlainBitVector, RrrBitVector, bv_build
from . import container as c
from .dictionaries import (
    DictionarySet,
    build_sorted_dictionaries,
    pack_sigma_l,
    pack_sigma_r,
    unpack_sigma_l,
    unpack_sigma_r,
)


def s2lcab_compress(corpus: Sequence[Biword], dicts: DictionarySet | None = None,
                    scheme: str | None = None, dac_width: int = 4) -> c.Archive:
    d = dicts or build_sorted_dictionaries(corpus)[0]
    index = d.biword_index
    ranks = d.biword_indices(corpus)
    eos_rank = index[(d.left_index[EOS_TOKEN], d.right_index[EOS.right])]

    table = code_table(max(len(d.sigma_b), max(len(d.sigma_l), len(d.sigma_r))))
    sigma_b_bytes = b"".join(table[x] for p in d.sigma_b for x in p)
    stream = b"".join([table[r] for r in ranks])

    lengths = np.fromiter((len(table[r]) for r in ranks), dtype=np.int64, count=len(ranks))
    ends = np.cumsum(lengths) - 1
    shifted = np.fromiter((any(b.offsets) for b in corpus), dtype=bool, count=len(corpus))
    p_bits = np.zeros(len(stream), dtype=np.uint8)
    p_bits[ends[shifted]] = 1

    complex_shift = any(classify_shift(b) is ShiftClass.COMPLEX_SHIFT for b in corpus)
    o_values, q_bits = [], []
    for b in corpus:
        if any(b.offsets):
            if complex_shift:
                o_values.extend(b.offsets)
                q_bits.extend([1] + [0] * (len(b.offsets) - 1))
            else:
                o_values.append(b.offsets[0])

    sections = {
        c.SIGMA_L: pack_sigma_l(d.sigma_l),
        c.SIGMA_R: pack_sigma_r(d.sigma_r),
        c.SIGMA_B: encode_uvarint(len(d.sigma_b)) + encode_uvarint(eos_rank) + sigma_b_bytes,
        c.STREAM_B: stream,
        c.STREAM_P: bv_build(p_bits, RRR).to_bytes(),
        c.STREAM_O: DacArray(o_values, dac_width).to_bytes(),
    }
    flags = 0
    if complex_shift:
        sections[c.STREAM_Q] = bv_build(q_bits, PLAIN).to_bytes()
        flags |= c.FLAG_Q
    return c.Archive("s2lcab", scheme, dac_width=dac_width, flags=flags, sections=sections)


@dataclass
class SearchableParts:
    """Decoded pieces of a searchable archive; ``sigma_r`` may stay packed."""

    sigma_l: list
    sigma_r_payload: bytes
    n_biwords: int
    eos_rank: int
    sigma_b_bytes: bytes
    stream: bytes
    p: BitVector
    o: DacArray
    q: BitVector | None


def _read_exact(cls, payload, what):
    try:
        obj, end = cls.from_bytes(payload, 0)
    except CodecError as exc:
        raise CorruptArchiveError(f"bad {what}: {exc}") from None
    if end != len(payload):
        raise CorruptArchiveError(f"trailing bytes after {what}")
    return obj


def read_parts(archive: c.Archive) -> SearchableParts:
    if archive.method != "s2lcab":
        raise CorruptArchiveError("not a searchable archive")
    rd = ByteReader(archive.section(c.SIGMA_B))
    n = rd.uvarint()
    eos_rank = rd.uvarint()
    sigma_b_bytes = rd.rest()
    stream = archive.section(c.STREAM_B)
    p = _read_exact(RrrBitVector, archive.section(c.STREAM_P), "shift bit vector")
    o = _read_exact(DacArray, archive.section(c.STREAM_O), "offset array")
    q = None
    if archive.flags & c.FLAG_Q:
        q = _read_exact(PlainBitVector, archive.section(c.STREAM_Q), "offset start bit vector")
        if len(q) != len(o):
            raise CorruptArchiveError("offset start bits do not match the offsets")
    elif c.STREAM_Q in archive.sections:
        raise CorruptArchiveError("unexpected offset start section")
    if len(p) != len(stream):
        raise CorruptArchiveError("shift bit vector does not cover the biword stream")
    if eos_rank >= max(n, 1):
        raise CorruptArchiveError("end-of-sentence rank out of range")
    return SearchableParts(unpack_sigma_l(archive.section(c.SIGMA_L)),
                           archive.section(c.SIGMA_R), n, eos_rank, sigma_b_bytes, stream, p, o, q)


def decode_sigma_b(parts: SearchableParts) -> list[tuple[int, int]]:
    try:
        refs = etdc_decode_all(parts.sigma_b_bytes).tolist()
    except CodecError as exc:
        raise CorruptArchiveError(f"bad biword dictionary: {exc}") from None
    if len(refs) != 2 * parts.n_biwords:
        raise CorruptArchiveError("biword dictionary size mismatch")
    return list(zip(refs[0::2], refs[1::2]))


def s2lcab_decompress(archive: c.Archive) -> list[Biword]:
    parts = read_parts(archive)
    sigma_l = parts.sigma_l
    sigma_r = unpack_sigma_r(parts.sigma_r_payload)
    sigma_b = decode_sigma_b(parts)
    if any(li >= len(sigma_l) or ri >= len(sigma_r) for li, ri in sigma_b):
        raise CorruptArchiveError("biword dictionary reference out of range")
    try:
        ranks = etdc_decode_all(parts.stream).tolist()
    except CodecError as exc:
        raise CorruptArchiveError(f"bad biword stream: {exc}") from None
    ends = codeword_ends(parts.stream)
    shifted = parts.p.to_bits()[ends].astype(bool).tolist() if len(ends) else []
    if parts.p.ones != sum(shifted):
        raise CorruptArchiveError("shift bits off codeword boundaries")
    o_values = parts.o.to_list()
    starts = np.flatnonzero(parts.q.to_bits()).tolist() + [len(o_values)] if parts.q else None
    if starts is not None and len(starts) - 1 != parts.p.ones:
        raise CorruptArchiveError("offset arrays do not match the shift biwords")
    if starts is None and len(o_values) != parts.p.ones:
        raise CorruptArchiveError("offsets do not match the shift biwords")

    out = []
    r = 0
    for rank, sh in zip(ranks, shifted):
        if rank >= len(sigma_b):
            raise CorruptArchiveError("biword rank out of range")
        li, ri = sigma_b[rank]
        left, right = sigma_l[li], sigma_r[ri]
        if left == EOS_TOKEN:
            out.append(EOS)
            continue
        if sh:
            if starts is None:
                omega = (o_values[r],) + (0,) * (len(right) - 1)
            else:
                omega = tuple(o_values[starts[r]:starts[r + 1]])
            if len(omega) != len(right) or not right:
                raise CorruptArchiveError("offset array does not fit its biword")
            r += 1
        else:
            omega = (0,) * len(right)
        out.append(Biword(left, right, omega))
    return out
