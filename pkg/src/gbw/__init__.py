"""Compression and translation spotting for word-aligned bitexts,
built on generalized biwords."""

from .archive import compress, decompress
from .bitext import AlignedBitext, SentencePair, load_bitext
from .biwords import (
    EOS,
    EPS,
    Biword,
    ShiftClass,
    check_order,
    classify_shift,
    extract_biwords,
    restore_left,
    restore_right,
)
from .errors import (
    AlignmentError,
    CodecError,
    CorruptArchiveError,
    CorruptSequenceError,
    GbwError,
    InputFormatError,
    SchemeError,
)
from .schemes import SCHEMES, build_corpus, optimize_delta, prune_biwords
from .spotting import LoadedArchive, Occurrence, spot

__version__ = "0.1.0"

__all__ = [
    "AlignedBitext", "AlignmentError", "Biword", "CodecError", "CorruptArchiveError",
    "CorruptSequenceError", "EOS", "EPS", "GbwError", "InputFormatError", "LoadedArchive",
    "Occurrence", "SCHEMES", "SchemeError", "SentencePair", "ShiftClass", "build_corpus",
    "check_order", "classify_shift", "compress", "decompress", "extract_biwords",
    "load_bitext", "optimize_delta", "prune_biwords", "restore_left", "restore_right", "spot",
]
