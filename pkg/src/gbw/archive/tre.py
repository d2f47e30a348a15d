"""Translation relationship-based encoder (TRE).

Each biword becomes a reference to its left word and the rank of its
right sequence among that word's translations; both are Huffman coded.
Ranks are not written for left words with a single translation.
"""

from __future__ import annotations

from typing import Sequence

from ..biwords import Biword
from ..codecs.varint import ByteReader, sized
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


def tau_table_ints(d: DictionarySet) -> list[int]:
    """The tau_B table as integers: per left word, its size then its references."""
    out = []
    for refs in d.tau_b:
        out.append(len(refs))
        out.extend(refs)
    return out


def tre_streams(corpus: Sequence[Biword], d: DictionarySet) -> tuple[list[int], list[int]]:
    """Left references and 1-based translation ranks, one of each per biword
    (ranks are 0 for end-of-sentence biwords)."""
    rank_of = [{r: k for k, r in enumerate(refs, 1)} for refs in d.tau_b]
    by_type = {}
    refs, ranks = [], []
    for b in corpus:
        hit = by_type.get(b)
        if hit is None:
            li, ri = d.pair(b)
            hit = by_type[b] = (li, 0 if li == 0 else rank_of[li][ri])
        refs.append(hit[0])
        ranks.append(hit[1])
    return refs, ranks


def tre_compress(corpus: Sequence[Biword], dicts: DictionarySet | None = None,
                 scheme: str | None = None) -> c.Archive:
    d = dicts or build_dictionaries(corpus)
    refs, ranks = tre_streams(corpus, d)
    coded_ranks = [r - 1 for li, r in zip(refs, ranks) if li and len(d.tau_b[li]) > 1]
    tau = tau_table_ints(d)
    st = encode_structural(corpus)
    books = [codebook_for(refs), codebook_for(coded_ranks), codebook_for(tau),
             codebook_for(st.p_deltas), codebook_for(st.o_values)]
    sections = {
        c.SIGMA_L: pack_sigma_l(d.sigma_l),
        c.SIGMA_R: pack_sigma_r(d.sigma_r),
        c.SIGMA_B: pack_stream(books[2], tau),
        c.STREAM_B: sized(pack_stream(books[0], refs)) + pack_stream(books[1], coded_ranks),
        c.STREAM_P: pack_stream(books[3], st.p_deltas),
        c.STREAM_O: pack_stream(books[4], st.o_values),
        c.CODE_TABLES: pack_tables(books),
    }
    return c.Archive("tre", scheme, sections=sections)


def _read_tau(ints: list[int], n_left: int, n_right: int) -> list[list[int]]:
    tau = []
    pos = 0
    for _ in range(n_left):
        if pos >= len(ints):
            raise CorruptArchiveError("translation table too short")
        size = ints[pos]
        refs = ints[pos + 1:pos + 1 + size]
        if len(refs) != size or any(r >= n_right for r in refs):
            raise CorruptArchiveError("bad translation table entry")
        tau.append(refs)
        pos += 1 + size
    if pos != len(ints):
        raise CorruptArchiveError("translation table too long")
    return tau


def tre_decompress(archive: c.Archive) -> list[Biword]:
    books = unpack_tables(archive.section(c.CODE_TABLES), 5)
    sigma_l = unpack_sigma_l(archive.section(c.SIGMA_L))
    sigma_r = unpack_sigma_r(archive.section(c.SIGMA_R))
    tau = _read_tau(unpack_stream(books[2], archive.section(c.SIGMA_B)), len(sigma_l), len(sigma_r))
    rd = ByteReader(archive.section(c.STREAM_B))
    refs = unpack_stream(books[0], rd.sized())
    coded = iter(unpack_stream(books[1], rd.rest()))
    d = DictionarySet(sigma_l, sigma_r, tau_b=tau)
    pairs = []
    try:
        for li in refs:
            if li == 0:
                pairs.append((0, 0))
                continue
            refs_li = tau[li]
            rank = next(coded) if len(refs_li) > 1 else 0
            pairs.append((li, refs_li[rank]))
    except (IndexError, StopIteration):
        raise CorruptArchiveError("translation rank out of range") from None
    if next(coded, None) is not None:
        raise CorruptArchiveError("unused translation ranks")
    st = StructuralStreams(tuple(unpack_stream(books[3], archive.section(c.STREAM_P))),
                           tuple(unpack_stream(books[4], archive.section(c.STREAM_O))))
    offsets = decode_structural(st, [len(sigma_r[ri]) for _, ri in pairs])
    return [biword_of(d, li, ri, om) for (li, ri), om in zip(pairs, offsets)]
