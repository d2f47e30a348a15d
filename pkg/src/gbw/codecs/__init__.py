"""Entropy coders used by the archive formats."""

from .etdc import etdc_code, etdc_decode, etdc_decode_all, etdc_rank_assignment
from .huffman import HuffmanCodebook, huffman_build, huffman_decode, huffman_encode
from .ppm import ppm_compress, ppm_decompress
from .varint import decode_uvarint, encode_uvarint

__all__ = [
    "HuffmanCodebook", "decode_uvarint", "encode_uvarint", "etdc_code", "etdc_decode",
    "etdc_decode_all", "etdc_rank_assignment", "huffman_build", "huffman_decode",
    "huffman_encode", "ppm_compress", "ppm_decompress",
]
