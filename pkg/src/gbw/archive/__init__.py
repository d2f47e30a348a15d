"""Archive formats and the four encoders."""

from .api import (
    BIWORD_METHODS,
    METHODS,
    CompressResult,
    compress,
    compression_ratio,
    decompress,
    decompress_corpus,
    encode_corpus,
    load_archive,
)
from .container import Archive
from .dictionaries import DictionarySet, build_dictionaries, build_sorted_dictionaries
from .searchable import s2lcab_compress, s2lcab_decompress
from .stats import CorpusStats, corpus_stats
from .structural import StructuralStreams, decode_structural, encode_structural
from .tre import tre_compress, tre_decompress
from .twolcab import twolcab_compress, twolcab_decompress
from .wh import wh_compress, wh_decompress

__all__ = [
    "Archive", "BIWORD_METHODS", "CompressResult", "CorpusStats", "DictionarySet", "METHODS",
    "StructuralStreams", "build_dictionaries", "build_sorted_dictionaries", "compress",
    "compression_ratio", "corpus_stats", "decode_structural", "decompress", "decompress_corpus",
    "encode_corpus", "encode_structural", "load_archive", "s2lcab_compress", "s2lcab_decompress",
    "tre_compress", "tre_decompress", "twolcab_compress", "twolcab_decompress", "wh_compress",
    "wh_decompress",
]
