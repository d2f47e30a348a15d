"""Huffman-coded integer streams and the code-table section."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..codecs.huffman import HuffmanCodebook, huffman_build, huffman_decode_at, huffman_encode
from ..codecs.ppm import ppm_compress, ppm_decompress
from ..codecs.varint import ByteReader, encode_uvarint
from ..errors import CodecError, CorruptArchiveError


def codebook_for(symbols: Sequence[int]) -> HuffmanCodebook:
    if len(symbols) == 0:
        return HuffmanCodebook(())
    return huffman_build(np.bincount(np.asarray(symbols, dtype=np.int64)).tolist())


def pack_stream(codebook: HuffmanCodebook, symbols: Sequence[int]) -> bytes:
    return encode_uvarint(len(symbols)) + huffman_encode(codebook, symbols)


def unpack_stream(codebooks, payload: bytes) -> list[int]:
    if isinstance(codebooks, HuffmanCodebook):
        codebooks = [codebooks]
    rd = ByteReader(payload)
    try:
        count = rd.uvarint()
        body = rd.rest()
        symbols, end = huffman_decode_at(codebooks, body, count)
    except CodecError as exc:
        raise CorruptArchiveError(f"bad Huffman stream: {exc}") from None
    if (end + 7) // 8 != len(body):
        raise CorruptArchiveError("trailing bytes after Huffman stream")
    return symbols


def pack_tables(codebooks: Sequence[HuffmanCodebook]) -> bytes:
    raw = b"".join(encode_uvarint(cb.size) + bytes(cb.lengths) for cb in codebooks)
    return ppm_compress(raw)


def unpack_tables(payload: bytes, expected: int) -> list[HuffmanCodebook]:
    try:
        rd = ByteReader(ppm_decompress(payload))
        tables = []
        while not rd.exhausted:
            tables.append(HuffmanCodebook(tuple(rd.take(rd.uvarint()))))
    except CodecError as exc:
        raise CorruptArchiveError(f"bad code tables: {exc}") from None
    if len(tables) != expected:
        raise CorruptArchiveError(f"expected {expected} code tables, found {len(tables)}")
    return tables
