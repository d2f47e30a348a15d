"""Word-based Huffman baseline: the tokens of the left then the right text,
with a newline token ending every line, over one shared vocabulary."""

from __future__ import annotations

from typing import Sequence

from ..codecs.varint import ByteReader, encode_uvarint
from ..errors import CorruptArchiveError
from . import container as c
from .coding import codebook_for, pack_stream, pack_tables, unpack_stream, unpack_tables
from .dictionaries import pack_entries, unpack_entries

NEWLINE = "\n"


def wh_tokens(left_lines: Sequence[Sequence[str]], right_lines: Sequence[Sequence[str]]):
    for lines in (left_lines, right_lines):
        for toks in lines:
            yield from toks
            yield NEWLINE


def wh_compress(left_lines: Sequence[Sequence[str]], right_lines: Sequence[Sequence[str]]) -> c.Archive:
    vocab = {NEWLINE: 0}
    symbols = [vocab.setdefault(t, len(vocab)) for t in wh_tokens(left_lines, right_lines)]
    book = codebook_for(symbols)
    sections = {
        c.SIGMA_L: pack_entries([""] + list(vocab)[1:], [0]),
        c.STREAM_B: encode_uvarint(len(left_lines)) + pack_stream(book, symbols),
        c.CODE_TABLES: pack_tables([book]),
    }
    return c.Archive("wh", None, sections=sections)


def wh_decompress(archive: c.Archive) -> tuple[list[tuple[str, ...]], list[tuple[str, ...]]]:
    (book,) = unpack_tables(archive.section(c.CODE_TABLES), 1)
    vocab, reserved = unpack_entries(archive.section(c.SIGMA_L))
    if len(reserved) != 1:
        raise CorruptArchiveError("vocabulary needs one reserved entry")
    vocab[reserved[0]] = NEWLINE
    rd = ByteReader(archive.section(c.STREAM_B))
    n_left = rd.uvarint()
    symbols = unpack_stream(book, rd.rest())
    lines, current = [], []
    try:
        for s in symbols:
            t = vocab[s]
            if t == NEWLINE:
                lines.append(tuple(current))
                current = []
            else:
                current.append(t)
    except IndexError:
        raise CorruptArchiveError("token outside the vocabulary") from None
    if current or len(lines) < n_left:
        raise CorruptArchiveError("token stream does not end with a line break")
    return lines[:n_left], lines[n_left:]
