"""Corpus and archive statistics."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from ..biwords import EOS, Biword, ShiftClass, classify_shift
from . import container as c

STREAM_SECTIONS = (c.STREAM_B, c.STREAM_P, c.STREAM_O, c.STREAM_Q)
DICTIONARY_SECTIONS = (c.SIGMA_L, c.SIGMA_R, c.SIGMA_B)


@dataclass
class CorpusStats:
    biwords: int = 0
    distinct: int = 0
    unpaired: int = 0
    sentences: int = 0
    shifts: dict = field(default_factory=lambda: {s.value: 0 for s in ShiftClass})
    archive_bytes: int | None = None
    stream_fraction: float | None = None
    dictionary_fraction: float | None = None
    header_fraction: float | None = None

    @property
    def unpaired_fraction(self) -> float:
        return self.unpaired / self.biwords if self.biwords else 0.0

    def lines(self) -> list[str]:
        """``key: value`` report lines."""
        out = [f"biwords: {self.biwords}", f"distinct_biwords: {self.distinct}",
               f"sentences: {self.sentences}",
               f"unpaired_fraction: {self.unpaired_fraction:.6f}"]
        out += [f"shift_{k.replace('-', '_')}: {v}" for k, v in self.shifts.items()]
        if self.archive_bytes is not None:
            out += [f"archive_bytes: {self.archive_bytes}",
                    f"stream_fraction: {self.stream_fraction:.6f}",
                    f"dictionary_fraction: {self.dictionary_fraction:.6f}",
                    f"header_fraction: {self.header_fraction:.6f}"]
        return out


def archive_fractions(archive: c.Archive) -> tuple[int, float, float, float]:
    """Total size and the shares of stream sections (B, P, O, Q),
    dictionary sections (left, right and biword dictionaries) and
    everything else (header, code tables, checksum)."""
    sizes = archive.section_sizes()
    total = archive.overhead + sum(sizes.values())
    stream = sum(sizes.get(s, 0) for s in STREAM_SECTIONS)
    dictionary = sum(sizes.get(s, 0) for s in DICTIONARY_SECTIONS)
    return total, stream / total, dictionary / total, (total - stream - dictionary) / total


def corpus_stats(corpus: Sequence[Biword], archive: c.Archive | None = None) -> CorpusStats:
    st = CorpusStats()
    types = Counter()
    for b in corpus:
        if b == EOS:
            st.sentences += 1
            continue
        st.biwords += 1
        types[b] += 1
        if b.unpaired:
            st.unpaired += 1
        st.shifts[classify_shift(b).value] += 1
    st.distinct = len(types)
    if archive is not None:
        (st.archive_bytes, st.stream_fraction, st.dictionary_fraction,
         st.header_fraction) = archive_fractions(archive)
    return st
