"""Method dispatch: bitext in, archive bytes out, and back."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from ..bitext import AlignedBitext, normalized_size
from ..biwords import Biword, corpus_texts
from ..errors import CorruptArchiveError
from ..schemes import Pruner, build_corpus, search_delta
from . import container as c
from .searchable import s2lcab_compress, s2lcab_decompress
from .tre import tre_compress, tre_decompress
from .twolcab import twolcab_compress, twolcab_decompress
from .wh import wh_compress, wh_decompress

log = logging.getLogger(__name__)

METHODS = ("wh", "tre", "2lcab", "s2lcab")
BIWORD_METHODS = ("tre", "2lcab", "s2lcab")

ENCODERS = {"tre": tre_compress, "2lcab": twolcab_compress, "s2lcab": s2lcab_compress}
DECODERS = {"tre": tre_decompress, "2lcab": twolcab_decompress, "s2lcab": s2lcab_decompress}


def compression_ratio(input_bytes: int, output_bytes: int) -> float:
    if input_bytes <= 0:
        raise ValueError("input size must be positive")
    return output_bytes / input_bytes


def encode_corpus(corpus: Sequence[Biword], method: str, scheme: str | None = None) -> c.Archive:
    try:
        encoder = ENCODERS[method]
    except KeyError:
        raise ValueError(f"{method!r} is not a biword method") from None
    return encoder(corpus, scheme=scheme)


@dataclass
class CompressResult:
    archive: c.Archive
    data: bytes
    input_size: int
    corpus: list | None = None
    delta: int = 0

    @property
    def ratio(self) -> float:
        return compression_ratio(self.input_size, len(self.data))


def parse_prune(prune) -> int | str:
    """``"off"`` -> 0, ``"auto"`` stays, integers (or their strings) pass."""
    if prune in (None, "off", 0):
        return 0
    if prune == "auto":
        return "auto"
    delta = int(prune)
    if delta < 0:
        raise ValueError("pruning threshold must be non-negative")
    return delta


def compress(bitext: AlignedBitext, method: str = "2lcab", scheme: str = "1ton-complex",
             prune="off") -> CompressResult:
    """Compress a loaded bitext.

    ``prune`` is ``"off"``, ``"auto"`` (threshold chosen by
    :func:`optimize_delta` on this method's output size) or a fixed
    threshold.  The word-Huffman baseline ignores ``scheme`` and ``prune``.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    size = normalized_size(bitext)
    if method == "wh":
        archive = wh_compress(bitext.left_lines, bitext.right_lines)
        return CompressResult(archive, archive.to_bytes(), size)

    corpus = build_corpus(bitext, scheme)
    delta = parse_prune(prune)
    if delta == "auto":
        def encoded(cp):
            archive = encode_corpus(cp, method, scheme)
            return _Sized(archive, archive.to_bytes(), cp)

        delta, _, best = search_delta(corpus, encoded, scheme=scheme)
        log.info("pruning threshold %d", delta)
        archive, corpus = best.archive, best.corpus
    else:
        if delta:
            corpus = Pruner(corpus, scheme=scheme).prune(delta)
        archive = encode_corpus(corpus, method, scheme)
    if delta:
        archive.flags |= c.FLAG_PRUNED
    return CompressResult(archive, archive.to_bytes(), size, corpus, delta)


@dataclass
class _Sized:
    # one probe of the threshold search; sized by its serialization
    archive: c.Archive
    data: bytes
    corpus: list

    def __len__(self):
        return len(self.data)


def load_archive(data) -> c.Archive:
    return data if isinstance(data, c.Archive) else c.Archive.from_bytes(data)


def decompress_corpus(data) -> list[Biword]:
    archive = load_archive(data)
    if archive.method not in DECODERS:
        raise CorruptArchiveError(f"{archive.method} archives hold no biword stream")
    return DECODERS[archive.method](archive)


def decompress(data) -> tuple[list[tuple[str, ...]], list[tuple[str, ...]]]:
    """Left and right token lines of an archive of any method."""
    archive = load_archive(data)
    if archive.method == "wh":
        return wh_decompress(archive)
    try:
        left, right = corpus_texts(decompress_corpus(archive))
    except CorruptArchiveError:
        raise
    except Exception as exc:  # restoration errors on a damaged stream
        raise CorruptArchiveError(f"cannot restore texts: {exc}") from None
    return [tuple(x) for x in left], [tuple(x) for x in right]
