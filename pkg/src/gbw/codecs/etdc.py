"""End-Tagged Dense Codes.

A codeword is a run of bytes below 0x80 closed by one byte at or above
0x80, so a codeword boundary follows every byte with the high bit set.
Ranks are assigned densely: the 128 most frequent items get one byte, the
next 128**2 get two, and so on.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np
from numba import njit

from ..errors import CodecError

_BAND_STARTS = [0]
for _k in range(1, 9):
    _BAND_STARTS.append(_BAND_STARTS[-1] + 128 ** _k)


def etdc_code(rank: int) -> bytes:
    if rank < 0:
        raise ValueError("ETDC rank must be non-negative")
    k = 1
    while rank >= _BAND_STARTS[k]:
        k += 1
    x = rank - _BAND_STARTS[k - 1]
    digits = []
    for _ in range(k):
        digits.append(x & 0x7F)
        x >>= 7
    digits.reverse()
    digits[-1] |= 0x80
    return bytes(digits)


def etdc_decode(data, pos: int = 0) -> tuple[int, int]:
    """Decode the codeword starting at ``pos``; return ``(rank, next pos)``."""
    x = 0
    k = 0
    n = len(data)
    while True:
        if pos >= n:
            raise CodecError("ETDC codeword runs past the end of the data")
        byte = data[pos]
        pos += 1
        k += 1
        if byte & 0x80:
            x = (x << 7) | (byte & 0x7F)
            if k >= len(_BAND_STARTS):
                raise CodecError("ETDC codeword too long")
            return _BAND_STARTS[k - 1] + x, pos
        x = (x << 7) | byte


def code_table(size: int) -> list[bytes]:
    return [etdc_code(r) for r in range(size)]


def etdc_encode_all(ranks: Iterable[int], table: list[bytes] | None = None) -> bytes:
    if table is None:
        codes = {}
        return b"".join([codes.get(r) or codes.setdefault(r, etdc_code(r)) for r in ranks])
    return b"".join([table[r] for r in ranks])


def etdc_decode_all(data) -> np.ndarray:
    """Ranks of every codeword in a concatenation, vectorised."""
    arr = np.frombuffer(bytes(data), dtype=np.uint8)
    if arr.size == 0:
        return np.zeros(0, dtype=np.int64)
    if arr[-1] < 0x80:
        raise CodecError("ETDC stream does not end on a codeword boundary")
    ends = np.flatnonzero(arr >= 0x80)
    starts = np.empty_like(ends)
    starts[0] = 0
    starts[1:] = ends[:-1] + 1
    lengths = ends - starts + 1
    if lengths.max() >= len(_BAND_STARTS):
        raise CodecError("ETDC codeword too long")
    values = np.zeros(ends.size, dtype=np.int64)
    for k in range(int(lengths.max())):
        idx = starts + k
        live = idx <= ends
        digit = np.where(live, arr[np.minimum(idx, ends)].astype(np.int64) & 0x7F, 0)
        values = np.where(live, (values << 7) | digit, values)
    return values + np.asarray(_BAND_STARTS, dtype=np.int64)[lengths - 1]


@njit(cache=True)
def _decode_range(arr, start, stop, bands):
    n = 0
    for i in range(start, stop):
        if arr[i] >= 0x80:
            n += 1
    ranks = np.empty(n, np.int64)
    ends = np.empty(n, np.int64)
    v = 0
    length = 0
    k = 0
    for i in range(start, stop):
        b = arr[i]
        length += 1
        v = (v << 7) | (b & 0x7F)
        if b >= 0x80:
            if length >= bands.shape[0]:
                return ranks, ends, False
            ranks[k] = v + bands[length - 1]
            ends[k] = i + 1
            k += 1
            v = 0
            length = 0
    return ranks, ends, length == 0


_BANDS = np.array(_BAND_STARTS, dtype=np.int64)


def etdc_decode_range(arr: np.ndarray, start: int, stop: int) -> tuple[np.ndarray, np.ndarray]:
    """Ranks of the codewords filling ``arr[start:stop]`` and the 1-based
    positions of their final bytes."""
    ranks, ends, ok = _decode_range(arr, start, stop, _BANDS)
    if not ok:
        raise CodecError("ETDC range does not hold whole codewords")
    return ranks, ends


def codeword_ends(data) -> np.ndarray:
    """0-based positions of codeword final bytes."""
    return np.flatnonzero(np.frombuffer(bytes(data), dtype=np.uint8) >= 0x80)


def etdc_rank_assignment(freqs: Mapping) -> dict:
    """Rank items by decreasing count; equal counts keep mapping order
    (first occurrence when the mapping was filled in corpus order)."""
    order = sorted(enumerate(freqs.items()), key=lambda t: (-t[1][1], t[0]))
    return {item: rank for rank, (_, (item, _)) in enumerate(order)}
