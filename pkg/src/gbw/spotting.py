"""Translation spotting on searchable archives.

A query word is looked up in the left dictionary, its codeword is searched
in the encoded biword dictionary to collect every biword with that left
word, and the codewords of those biwords are searched in the encoded
biword stream.  Each hit is expanded to its sentence, whose right side is
rebuilt with the offsets stored next to the stream.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np
from numba import njit

from .archive.container import Archive
from .archive.dictionaries import unpack_sigma_r
from .archive.searchable import decode_sigma_b, read_parts
from .bitext import tokenize_line
from .biwords import EOS_TOKEN, EPS, Biword, _make, place_right
from .codecs.etdc import etdc_code, etdc_decode_range
from .errors import CodecError, CorruptArchiveError
from .succinct import PlainBitVector


class LoadedArchive:
    """A searchable archive held in memory.

    The left dictionary is kept uncompressed; the right dictionary is only
    decompressed when a context is first rebuilt.
    """

    def __init__(self, source):
        if isinstance(source, Archive):
            archive = source
        else:
            if not isinstance(source, (bytes, bytearray, memoryview)):
                with open(source, "rb") as fh:
                    source = fh.read()
            archive = Archive.from_bytes(source)
        if archive.method != "s2lcab":
            raise CorruptArchiveError(f"spotting needs an s2lcab archive, not {archive.method}")
        self.archive = archive
        parts = read_parts(archive)
        self._parts = parts
        self.sigma_l = parts.sigma_l
        self.left_rank = {w: k for k, w in enumerate(self.sigma_l) if w not in (EOS_TOKEN, EPS)}
        self.n_biwords = parts.n_biwords
        self.eos_rank = parts.eos_rank
        self.eos_code = etdc_code(parts.eos_rank)
        self.sigma_b_bytes = np.frombuffer(parts.sigma_b_bytes, dtype=np.uint8)
        # b_n = 1 where byte n ends a codeword of the biword dictionary
        self.S = PlainBitVector(self.sigma_b_bytes >= 0x80)
        if self.S.ones != 2 * self.n_biwords:
            raise CorruptArchiveError("biword dictionary size mismatch")
        self.stream = parts.stream
        self.stream_arr = np.frombuffer(parts.stream, dtype=np.uint8)
        self.P = parts.p
        self.O = parts.o
        self.Q = parts.q
        self._unshifted: dict[int, Biword] = {}

    def unshifted_biword(self, rank: int) -> Biword:
        """The biword of dictionary entry ``rank`` with all offsets zero."""
        b = self._unshifted.get(rank)
        if b is None:
            li, ri = self.sigma_b[rank]
            right = self.sigma_r[ri]
            b = self._unshifted[rank] = _make(Biword, (self.sigma_l[li], right, (0,) * len(right)))
        return b

    @cached_property
    def sigma_r(self) -> list:
        return unpack_sigma_r(self._parts.sigma_r_payload)

    @cached_property
    def sigma_b(self) -> list[tuple[int, int]]:
        return decode_sigma_b(self._parts)

    @cached_property
    def codeword_ends(self) -> PlainBitVector:
        return PlainBitVector(self.stream_arr >= 0x80)

    @cached_property
    def eos_positions(self) -> list[int]:
        return _set_horspool_scan(self.stream_arr, [self.eos_code]).tolist()


@dataclass(frozen=True)
class Occurrence:
    """One hit: ``left_span`` is a half-open range of left token indices
    and ``right_highlights`` lists the right token indices (0-based) that
    translate it."""

    byte_position: int
    biword_index: int
    sentence: int
    left: tuple[str, ...]
    right: tuple[str, ...]
    left_span: tuple[int, int]
    right_highlights: tuple[int, ...]


def find_left_codeword(w: str, la: LoadedArchive) -> tuple[int, bytes] | None:
    rank = la.left_rank.get(w)
    if rank is None:
        return None
    return rank, etdc_code(rank)


@njit(cache=True)
def _kmp_ends(text, pattern):
    m = pattern.shape[0]
    fail = np.zeros(m, np.int64)
    k = 0
    for i in range(1, m):
        while k > 0 and pattern[i] != pattern[k]:
            k = fail[k - 1]
        if pattern[i] == pattern[k]:
            k += 1
        fail[i] = k
    out = np.zeros(16, np.int64)
    n_out = 0
    k = 0
    for i in range(text.shape[0]):
        while k > 0 and text[i] != pattern[k]:
            k = fail[k - 1]
        if text[i] == pattern[k]:
            k += 1
        if k == m:
            if n_out == out.shape[0]:
                bigger = np.zeros(2 * n_out, np.int64)
                bigger[:n_out] = out
                out = bigger
            out[n_out] = i
            n_out += 1
            k = fail[k - 1]
    return out[:n_out]


def kmp_search(text, pattern: bytes) -> np.ndarray:
    """0-based end positions of every occurrence of ``pattern``."""
    if not pattern:
        raise ValueError("empty pattern")
    text = np.frombuffer(bytes(text), dtype=np.uint8) if not isinstance(text, np.ndarray) else text
    return _kmp_ends(text, np.frombuffer(bytes(pattern), dtype=np.uint8))


def scan_sigma_b(code: bytes, la: LoadedArchive) -> list[int]:
    """Ranks of the biwords whose left component has codeword ``code``,
    ascending; the end-of-sentence biword is never reported."""
    text = la.sigma_b_bytes
    ranks = []
    for end in kmp_search(text, code).tolist():
        start = end - len(code) + 1
        if start > 0 and text[start - 1] < 0x80:
            continue
        r = la.S.rank(end + 1)
        if r % 2 == 0:
            continue  # a right reference with the same codeword
        rank = (r - 1) // 2
        if rank != la.eos_rank:
            ranks.append(rank)
    return ranks


def _build_trie(patterns: Sequence[bytes]):
    child = [[-1] * 256]
    terminal = [0]
    for p in patterns:
        node = 0
        for byte in reversed(p):
            nxt = child[node][byte]
            if nxt == -1:
                nxt = len(child)
                child[node][byte] = nxt
                child.append([-1] * 256)
                terminal.append(0)
            node = nxt
        terminal[node] = len(p)
    return np.array(child, dtype=np.int32), np.array(terminal, dtype=np.int64)


def _shift_table(patterns: Sequence[bytes]) -> np.ndarray:
    lmin = min(len(p) for p in patterns)
    d = np.full(256, lmin, dtype=np.int64)
    for p in patterns:
        for k in range(len(p) - 1):
            d[p[k]] = min(d[p[k]], len(p) - 1 - k)
    return d


@njit(cache=True)
def _horspool_kernel(text, child, terminal, shift, lmin, lmax):
    n = text.shape[0]
    out = np.zeros(16, np.int64)
    n_out = 0
    i = lmin - 1
    while i < n:
        node = 0
        j = i
        found = False
        while j >= 0 and i - j < lmax:
            node = child[node, text[j]]
            if node == -1:
                break
            if terminal[node] > 0:
                start = i - terminal[node] + 1
                # only matches that start on a codeword boundary count
                if start == 0 or text[start - 1] >= 0x80:
                    found = True
                    break
            j -= 1
        if found:
            if n_out == out.shape[0]:
                bigger = np.zeros(2 * n_out, np.int64)
                bigger[:n_out] = out
                out = bigger
            out[n_out] = i + 1
            n_out += 1
        i += shift[text[i]]
    return out[:n_out]


def _set_horspool_scan(text: np.ndarray, patterns: Sequence[bytes]) -> np.ndarray:
    child, terminal = _build_trie(patterns)
    lens = [len(p) for p in patterns]
    return _horspool_kernel(text, child, terminal, _shift_table(patterns), min(lens), max(lens))


def set_horspool(text, patterns: Sequence[bytes]) -> list[int]:
    """1-based positions of the final bytes of codeword-aligned
    occurrences of any pattern in a stream of dense codewords."""
    patterns = [bytes(p) for p in patterns]
    if not patterns or any(not p for p in patterns):
        raise ValueError("patterns must be non-empty")
    arr = text if isinstance(text, np.ndarray) else np.frombuffer(bytes(text), dtype=np.uint8)
    return _set_horspool_scan(arr, patterns).tolist()


def scan_b_stream(Z: Sequence[bytes], la: LoadedArchive) -> list[int]:
    if not Z:
        return []
    return set_horspool(la.stream_arr, Z)


def resolve_offsets(m: int, shape: int, la: LoadedArchive) -> tuple[int, ...]:
    """Offsets of the biword whose codeword ends at byte ``m`` (1-based)."""
    if not la.P.access(m):
        return (0,) * shape
    return _shift_offsets(la.P.rank(m), shape, la)


def _shift_offsets(r: int, shape: int, la: LoadedArchive) -> tuple[int, ...]:
    # offsets of the biword holding the r-th shift (1-based)
    if la.Q is None:
        if shape < 1:
            raise CorruptArchiveError("shift recorded for a biword without right words")
        return (la.O[r - 1],) + (0,) * (shape - 1)
    i = la.Q.select(r)
    j = la.Q.select(r + 1) - 1 if r < la.Q.ones else len(la.O)
    omega = tuple(la.O[k - 1] for k in range(i, j + 1))
    if len(omega) != shape:
        raise CorruptArchiveError("offset array length does not match its biword")
    return omega


def _offset_runs(r0: int, k: int, la: LoadedArchive) -> list[tuple[int, ...]]:
    # offsets of the shifts r0 + 1 .. r0 + k; without Q only the first
    # offset of each biword is stored
    if not k:
        return []
    O, Q = la.O, la.Q
    if Q is None:
        return [(O[r],) for r in range(r0, r0 + k)]
    first = Q.select(r0 + 1)
    last = Q.select(r0 + k + 1) - 1 if r0 + k < Q.ones else len(O)
    starts = Q.ones_between(first - 1, last) + [last + 1]
    values = O.slice(first - 1, last)
    return [tuple(values[a - first:b - first]) for a, b in zip(starts, starts[1:])]


@dataclass(frozen=True)
class Context:
    sentence: int
    start: int  # 0-based byte offset of the sentence's first codeword
    ends: tuple[int, ...]  # 1-based final byte of each biword
    biwords: tuple[Biword, ...]
    left: tuple[str, ...]
    right: tuple[str, ...]
    owners: tuple[int, ...]  # biword index (within the sentence) per right position
    left_ids: tuple[int, ...] = ()  # index of the biword holding each left word


def reconstruct_context(m: int, la: LoadedArchive) -> Context:
    """The sentence containing the biword whose codeword ends at byte ``m``."""
    arr = la.stream_arr
    if not 1 <= m <= len(arr) or arr[m - 1] < 0x80:
        raise ValueError(f"byte {m} does not end a codeword")
    # the sentence runs from just after the previous end-of-sentence
    # codeword up to the next one (or the stream ends)
    eos_ends = la.eos_positions
    sentence = bisect.bisect_left(eos_ends, m)
    start = eos_ends[sentence - 1] if sentence else 0
    stop = eos_ends[sentence] - len(la.eos_code) if sentence < len(eos_ends) else len(arr)
    try:
        ranks, ends = etdc_decode_range(arr, start, stop)
    except CodecError as exc:
        raise CorruptArchiveError(f"bad biword stream: {exc}") from None
    ranks, ends = ranks.tolist(), ends.tolist()
    if ranks and max(ranks) >= len(la.sigma_b):
        raise CorruptArchiveError("biword rank out of range")
    cached = la._unshifted.get
    biwords = [cached(r) or la.unshifted_biword(r) for r in ranks]
    # shifted biwords of this sentence, found by the byte ending their codeword
    marks = la.P.ones_between(start, stop)
    for end, omega in zip(marks, _offset_runs(la.P.rank(start), len(marks), la)):
        i = bisect.bisect_left(ends, end)
        if i == len(ends) or ends[i] != end:
            raise CorruptArchiveError(f"shift mark at byte {end} is not a codeword end")
        left, right, _ = biwords[i]
        if len(omega) != len(right):
            if la.Q is not None or not right:
                raise CorruptArchiveError("offset array length does not match its biword")
            omega += (0,) * (len(right) - 1)
        biwords[i] = _make(Biword, (left, right, omega))
    right, owners = place_right(biwords)
    left_ids, left = [], []
    for i, b in enumerate(biwords):
        if b[0] is not EPS:
            left_ids.append(i)
            left.append(b[0])
    return Context(sentence, start, tuple(ends), tuple(biwords), tuple(left), tuple(right),
                   tuple(owners), tuple(left_ids))


def _normalize_query(query) -> tuple[str, ...]:
    if isinstance(query, (str, bytes)):
        return tokenize_line(query)
    return tuple(t for q in query for t in tokenize_line(q))


def spot(query, la: LoadedArchive, limit: int | None = None,
         pivot: int | None = None) -> list[Occurrence]:
    """Occurrences of the word sequence ``query`` in the left text.

    The scan runs for the query word with the fewest biword types
    (``pivot`` forces a choice); the other words filter the rebuilt
    sentences.
    """
    words = _normalize_query(query)
    if not words or limit == 0:
        return []
    Z = []
    for w in words:
        hit = find_left_codeword(w, la)
        if hit is None:
            return []
        ranks = scan_sigma_b(hit[1], la)
        if not ranks:
            return []
        Z.append(ranks)
    k = min(range(len(words)), key=lambda i: (len(Z[i]), i)) if pivot is None else pivot
    hits = scan_b_stream([etdc_code(r) for r in Z[k]], la)

    out = []
    ctx = None
    for m in hits:
        # hits ascend, so consecutive hits in one sentence share its context
        if ctx is None or not ctx.start < m <= ctx.ends[-1]:
            ctx = reconstruct_context(m, la)
        idx = bisect.bisect_left(ctx.ends, m)
        s = bisect.bisect_left(ctx.left_ids, idx) - k
        if s < 0 or ctx.left[s:s + len(words)] != words:
            continue
        run = set(ctx.left_ids[s:s + len(words)])
        highlights = tuple(j for j, o in enumerate(ctx.owners) if o in run)
        out.append(Occurrence(m, la.codeword_ends.rank(m) - 1, ctx.sentence, ctx.left,
                              ctx.right, (s, s + len(words)), highlights))
        if limit is not None and len(out) >= limit:
            break
    return out
