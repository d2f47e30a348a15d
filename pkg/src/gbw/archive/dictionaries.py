"""Dictionaries shared by the biword encoders and their section payloads."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from ..biwords import EOS, EOS_TOKEN, EPS, Biword
from ..codecs.ppm import ppm_compress, ppm_decompress
from ..codecs.varint import ByteReader, encode_uvarint
from ..errors import CodecError, CorruptArchiveError

EOS_SEQ = (EOS_TOKEN,)
EMPTY_SEQ = ()


@dataclass
class DictionarySet:
    """``sigma_l`` holds left words (``EOS_TOKEN`` and ``EPS`` included),
    ``sigma_r`` right sequences, ``sigma_b`` (left index, right index)
    pairs and ``tau_b`` the translations of each left word, most frequent
    first."""

    sigma_l: list
    sigma_r: list
    sigma_b: list = field(default_factory=list)
    tau_b: list = field(default_factory=list)

    def __post_init__(self):
        self.left_index = {w: k for k, w in enumerate(self.sigma_l)}
        self.right_index = {r: k for k, r in enumerate(self.sigma_r)}
        self.biword_index = {p: k for k, p in enumerate(self.sigma_b)}

    def pair(self, b: Biword) -> tuple[int, int]:
        return self.left_index[b.left], self.right_index[b.right]

    def biword_indices(self, corpus: Sequence[Biword]) -> list[int]:
        """``sigma_b`` index of every biword, resolved once per type."""
        by_type = {}
        out = []
        for b in corpus:
            k = by_type.get(b)
            if k is None:
                k = by_type[b] = self.biword_index[self.pair(b)]
            out.append(k)
        return out


def _first_seen(corpus: Sequence[Biword]):
    # one pass over biword types, which keep first-occurrence order
    types = Counter(corpus)
    left = {EOS_TOKEN: 0, EPS: 0}
    right = {EOS_SEQ: 0, EMPTY_SEQ: 0}
    pairs = Counter()
    for b, n in types.items():
        left.setdefault(b.left, 0)
        right.setdefault(b.right, 0)
        pairs[(b.left, b.right)] += n
    pairs.setdefault((EOS_TOKEN, EOS_SEQ), 0)
    return list(left), list(right), pairs, types


def build_dictionaries(corpus: Sequence[Biword]) -> DictionarySet:
    """Dictionaries in first-occurrence order with the reserved entries
    (end of sentence at 0, the empty word and empty sequence at 1) first;
    ``sigma_b`` starts with the end-of-sentence biword."""
    sigma_l, sigma_r, pairs, _ = _first_seen(corpus)
    li = {w: k for k, w in enumerate(sigma_l)}
    ri = {r: k for k, r in enumerate(sigma_r)}
    sigma_b = [(0, 0)]
    seen = {(0, 0)}
    by_left = {}
    for (left, right), count in pairs.items():
        p = (li[left], ri[right])
        if p not in seen:
            seen.add(p)
            sigma_b.append(p)
        by_left.setdefault(p[0], []).append((count, p[1]))
    tau_b = []
    for k in range(len(sigma_l)):
        entries = by_left.get(k, [])
        # stable sort: equal counts stay in first-occurrence order
        tau_b.append([r for _, r in sorted(entries, key=lambda e: -e[0])])
    return DictionarySet(sigma_l, sigma_r, sigma_b, tau_b)


def build_sorted_dictionaries(corpus: Sequence[Biword]) -> tuple[DictionarySet, Counter]:
    """Dictionaries for the searchable format: ``sigma_b`` sorted by
    decreasing biword frequency, ``sigma_l`` and ``sigma_r`` by decreasing
    number of ``sigma_b`` entries referring to them.  Ties keep first
    occurrence order.  Also returns the biword pair counts."""
    sigma_l, sigma_r, pairs, _ = _first_seen(corpus)
    pair_list = list(pairs)
    pair_list.sort(key=lambda p: -pairs[p])
    left_use = Counter(p[0] for p in pair_list)
    right_use = Counter(p[1] for p in pair_list)
    sigma_l = sorted(sigma_l, key=lambda w: -left_use[w])
    sigma_r = sorted(sigma_r, key=lambda r: -right_use[r])
    li = {w: k for k, w in enumerate(sigma_l)}
    ri = {r: k for k, r in enumerate(sigma_r)}
    sigma_b = [(li[l], ri[r]) for l, r in pair_list]
    return DictionarySet(sigma_l, sigma_r, sigma_b), pairs


def pack_entries(entries: Sequence[str], reserved: Sequence[int]) -> bytes:
    """Serialise a dictionary of strings.

    ``reserved`` lists the positions of entries that are not stored (their
    meaning is fixed by their role), in role order.  The remaining entries
    are joined with NUL and PPM compressed.
    """
    skip = set(reserved)
    body = "\x00".join(e for k, e in enumerate(entries) if k not in skip)
    out = [encode_uvarint(len(entries)), encode_uvarint(len(reserved))]
    out.extend(encode_uvarint(r) for r in reserved)
    out.append(ppm_compress(body.encode("utf-8")))
    return b"".join(out)


def unpack_entries(payload: bytes) -> tuple[list[str], list[int]]:
    """Inverse of :func:`pack_entries`; reserved positions hold ``""``."""
    rd = ByteReader(payload)
    try:
        n = rd.uvarint()
        reserved = [rd.uvarint() for _ in range(rd.uvarint())]
        body = ppm_decompress(rd.rest()).decode("utf-8")
    except (CodecError, UnicodeDecodeError) as exc:
        raise CorruptArchiveError(f"bad dictionary section: {exc}") from None
    stored = n - len(reserved)
    if len(set(reserved)) != len(reserved) or any(r >= n for r in reserved) or stored < 0:
        raise CorruptArchiveError("bad reserved dictionary positions")
    pieces = body.split("\x00") if stored else []
    if stored and len(pieces) != stored or not stored and body:
        raise CorruptArchiveError("dictionary entry count mismatch")
    it = iter(pieces)
    skip = set(reserved)
    return [("" if k in skip else next(it)) for k in range(n)], reserved


def pack_sigma_l(sigma_l: Sequence) -> bytes:
    reserved = [sigma_l.index(EOS_TOKEN), sigma_l.index(EPS)]
    return pack_entries(["" if w in (EOS_TOKEN, EPS) else w for w in sigma_l], reserved)


def unpack_sigma_l(payload: bytes) -> list:
    entries, reserved = unpack_entries(payload)
    if len(reserved) != 2:
        raise CorruptArchiveError("left dictionary needs two reserved entries")
    out = list(entries)
    out[reserved[0]] = EOS_TOKEN
    out[reserved[1]] = EPS
    return out


def pack_sigma_r(sigma_r: Sequence[tuple]) -> bytes:
    reserved = [sigma_r.index(EOS_SEQ), sigma_r.index(EMPTY_SEQ)]
    return pack_entries([" ".join(r) if r not in (EOS_SEQ, EMPTY_SEQ) else "" for r in sigma_r],
                        reserved)


def unpack_sigma_r(payload: bytes) -> list:
    entries, reserved = unpack_entries(payload)
    if len(reserved) != 2:
        raise CorruptArchiveError("right dictionary needs two reserved entries")
    out = [tuple(e.split(" ")) for e in entries]
    out[reserved[0]] = EOS_SEQ
    out[reserved[1]] = EMPTY_SEQ
    return out


def biword_of(d: DictionarySet, li: int, ri: int, offsets: tuple) -> Biword:
    left = d.sigma_l[li]
    right = d.sigma_r[ri]
    if left == EOS_TOKEN:
        return EOS
    return Biword(left, right, offsets)
