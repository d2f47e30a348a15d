"""Two-level compact biword encoder (2LCAB).

The biword dictionary is written as alternating left and right
references, each kind with its own Huffman code; the biword stream is a
Huffman-coded sequence of dictionary indices.
"""

from __future__ import annotations

from typing import Sequence

from ..biwords import Biword
from ..codecs.huffman import encode_interleaved
from ..codecs.varint import encode_uvarint
from ..errors import CorruptArchiveError
from . import container as c
from .coding import codebook_for, pack_stream, pack_tables, unpack_stream, unpack_tables
from .dictionaries import (
    DictionarySet,
    biword_of,
    build_dictionaries,
    pack_sigma_l,
    pack_sigma_r,
    unpack_sigma_l,
    unpack_sigma_r,
)
from .structural import StructuralStreams, decode_structural, encode_structural


def biword_stream(corpus: Sequence[Biword], d: DictionarySet) -> list[int]:
    return d.biword_indices(corpus)


def twolcab_compress(corpus: Sequence[Biword], dicts: DictionarySet | None = None,
                     scheme: str | None = None) -> c.Archive:
    d = dicts or build_dictionaries(corpus)
    stream = biword_stream(corpus, d)
    lefts = [p[0] for p in d.sigma_b]
    rights = [p[1] for p in d.sigma_b]
    st = encode_structural(corpus)
    books = [codebook_for(lefts), codebook_for(rights), codebook_for(stream),
             codebook_for(st.p_deltas), codebook_for(st.o_values)]
    alternating = [x for p in d.sigma_b for x in p]
    sections = {
        c.SIGMA_L: pack_sigma_l(d.sigma_l),
        c.SIGMA_R: pack_sigma_r(d.sigma_r),
        c.SIGMA_B: encode_uvarint(len(alternating)) + encode_interleaved(books[:2], alternating),
        c.STREAM_B: pack_stream(books[2], stream),
        c.STREAM_P: pack_stream(books[3], st.p_deltas),
        c.STREAM_O: pack_stream(books[4], st.o_values),
        c.CODE_TABLES: pack_tables(books),
    }
    return c.Archive("2lcab", scheme, sections=sections)


def twolcab_decompress(archive: c.Archive) -> list[Biword]:
    books = unpack_tables(archive.section(c.CODE_TABLES), 5)
    sigma_l = unpack_sigma_l(archive.section(c.SIGMA_L))
    sigma_r = unpack_sigma_r(archive.section(c.SIGMA_R))
    alternating = unpack_stream(books[:2], archive.section(c.SIGMA_B))
    if len(alternating) % 2:
        raise CorruptArchiveError("odd biword dictionary length")
    sigma_b = list(zip(alternating[0::2], alternating[1::2]))
    if any(li >= len(sigma_l) or ri >= len(sigma_r) for li, ri in sigma_b):
        raise CorruptArchiveError("biword dictionary reference out of range")
    d = DictionarySet(sigma_l, sigma_r, sigma_b)
    stream = unpack_stream(books[2], archive.section(c.STREAM_B))
    try:
        pairs = [sigma_b[k] for k in stream]
    except IndexError:
        raise CorruptArchiveError("biword index out of range") from None
    st = StructuralStreams(tuple(unpack_stream(books[3], archive.section(c.STREAM_P))),
                           tuple(unpack_stream(books[4], archive.section(c.STREAM_O))))
    offsets = decode_structural(st, [len(sigma_r[ri]) for _, ri in pairs])
    return [biword_of(d, li, ri, om) for (li, ri), om in zip(pairs, offsets)]
