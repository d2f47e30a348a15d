"""Generalized biwords: extraction from word alignments and text restoration.

A generalized biword ``(left, right, offsets)`` joins one left word (or the
empty word, ``EPS``) with the sequence of right words aligned to it.  The
offsets locate every right word: the first one counts the words between it
and the first unfilled gap of the right sentence, later ones count the
words between it and its predecessor in ``right``.

Positions are 1-based throughout, matching the alignment model.
"""

from __future__ import annotations

import enum
from typing import Iterable, Iterator, NamedTuple, Sequence

from .bitext import SentencePair
from .errors import CorruptSequenceError

EPS = None
# NUL never survives tokenisation, so it cannot collide with a real token.
EOS_TOKEN = "\x00"


class Biword(NamedTuple):
    left: str | None
    right: tuple[str, ...]
    offsets: tuple[int, ...]

    @property
    def unpaired(self) -> bool:
        return self.left is EPS or not self.right

    @property
    def has_shift(self) -> bool:
        return any(self.offsets)

    def __repr__(self):
        left = "ε" if self.left is EPS else ("<eos>" if self.left == EOS_TOKEN else self.left)
        return f"({left}, {self.right}, {self.offsets})"


EOS = Biword(EOS_TOKEN, (EOS_TOKEN,), (0,))

# skips the generated keyword-argument constructor in hot loops
_make = tuple.__new__


class ShiftClass(enum.Enum):
    NO_SHIFT = "no-shift"
    SIMPLE_SHIFT = "simple-shift"
    COMPLEX_SHIFT = "complex-shift"


def classify_shift(b: Biword) -> ShiftClass:
    offs = b.offsets
    if any(offs[1:]):
        return ShiftClass.COMPLEX_SHIFT
    if offs and offs[0]:
        return ShiftClass.SIMPLE_SHIFT
    return ShiftClass.NO_SHIFT


def link_tables(pair: SentencePair):
    """``(targets, owner)`` lookup tables of a pair's links."""
    M, N = len(pair.left), len(pair.right)
    targets = [[] for _ in range(M + 1)]
    owner = [0] * (N + 2)
    for i, j in pair.links:
        targets[i].append(j)
        owner[j] = i
    for t in targets:
        t.sort()
    return targets, owner


def next_right(m: int, n: int, owner: Sequence[int], N: int) -> int:
    """Advance ``n`` to the next right word that is unaligned or aligned
    with ``l_m`` or a later left word.

    ``owner[j]`` is the (1-based) left word aligned with ``r_j``, 0 if none.
    """
    while True:
        n += 1
        if n > N or owner[n] == 0 or owner[n] >= m:
            return n


def _extract(pair: SentencePair, trace: list | None = None) -> list[Biword]:
    targets, owner = link_tables(pair)
    return extract_from_tables(pair.left, pair.right, targets, owner, trace)


def extract_from_tables(left, right, targets, owner, trace: list | None = None) -> list[Biword]:
    """Extraction over precomputed link tables (see :func:`link_tables`):
    ``targets[m]`` lists the sorted right positions of ``l_m`` and
    ``owner[n]`` is the left word of ``r_n`` (0 if unaligned)."""
    M, N = len(left), len(right)
    out = []
    append = out.append
    m = n = 1
    while m <= M and n <= N:
        tm = targets[m]
        if not tm:
            append(_make(Biword, (left[m - 1], (), ())))
            if trace is not None:
                trace.append(())
            m += 1
        elif owner[n] == 0:
            append(_make(Biword, (EPS, (right[n - 1],), (0,))))
            if trace is not None:
                trace.append((n,))
            n = next_right(m, n, owner, N)
        else:
            if len(tm) == 1:
                j = tm[0]
                rho = (right[j - 1],)
                omega = (j - n,)
                if n == j:
                    n = next_right(m, n, owner, N)
            else:
                rho = []
                omega = []
                k = n
                for j in tm:
                    rho.append(right[j - 1])
                    omega.append(j - k)
                    k = j + 1
                    if n == j:
                        n = next_right(m, n, owner, N)
                rho = tuple(rho)
                omega = tuple(omega)
            append(_make(Biword, (left[m - 1], rho, omega)))
            if trace is not None:
                trace.append(tuple(tm))
            m += 1
    while m <= M:
        append(_make(Biword, (left[m - 1], (), ())))
        if trace is not None:
            trace.append(())
        m += 1
    while n <= N:
        if owner[n] == 0:
            append(_make(Biword, (EPS, (right[n - 1],), (0,))))
            if trace is not None:
                trace.append((n,))
        n += 1
    return out


def extract_biwords(pair: SentencePair) -> list[Biword]:
    """Biword sequence of one sentence pair with a one-to-many alignment."""
    return _extract(pair)


def extract_biwords_traced(pair: SentencePair) -> tuple[list[Biword], list[tuple[int, ...]]]:
    """Like :func:`extract_biwords`, also returning the absolute right
    positions of each biword's right words (a debugging side channel)."""
    trace = []
    return _extract(pair, trace), trace


def place_right(biwords: Iterable[Biword]) -> tuple[list[str], list[int]]:
    """Run the restoration gap pointer over one sentence.

    Returns the right tokens and, for each right position, the index of the
    biword that wrote it.
    """
    biwords = biwords if isinstance(biwords, (list, tuple)) else list(biwords)
    # every right word is written exactly once, so the sentence length is known
    total = sum([len(b[1]) for b in biwords])
    slots: list = [None] * total
    owners: list = [-1] * total
    n = 1
    for idx, (_, right, offsets) in enumerate(biwords):
        if not right:
            continue
        if len(right) == 1 and offsets and not offsets[0]:
            # position n is free by definition
            slots[n - 1] = right[0]
            owners[n - 1] = idx
        else:
            k = n - 1
            for w, off in zip(right, offsets):
                if off < 0:
                    raise CorruptSequenceError(f"negative offset in biword {idx}")
                k += off + 1
                if k > total:
                    raise CorruptSequenceError(f"biword {idx} writes past the end of the sentence")
                if owners[k - 1] != -1:
                    raise CorruptSequenceError(f"biword {idx} overwrites right position {k}")
                slots[k - 1] = w
                owners[k - 1] = idx
        while n <= total and owners[n - 1] != -1:
            n += 1
    if n <= total:
        raise CorruptSequenceError(f"right position {n} is never filled")
    return slots, owners


def restore_right(biwords: Iterable[Biword]) -> list[str]:
    return place_right(biwords)[0]


def restore_left(biwords: Iterable[Biword]) -> list[str]:
    return [b.left for b in biwords if b.left is not EPS]


def pair_from_biwords(biwords: Sequence[Biword]) -> SentencePair:
    """Recover the sentence pair (texts and links) a biword sequence encodes."""
    right, owners = place_right(biwords)
    left = []
    left_of = []
    for b in biwords:
        if b.left is EPS:
            left_of.append(0)
        else:
            left.append(b.left)
            left_of.append(len(left))
    links = frozenset((left_of[o], j) for j, o in enumerate(owners, 1) if left_of[o])
    return SentencePair(tuple(left), tuple(right), links)


def check_order(seq: Sequence[Biword], pair: SentencePair) -> bool:
    """Whether ``seq`` lists the connected components of ``pair`` in the
    canonical biword order.

    Left-word biwords must follow the left sentence, with offsets measured
    from the first unfilled gap at that point; empty-left biwords
    must follow the right sentence; and an empty-left biword must come
    before a left-word biword exactly when its right word is the first
    unfilled gap and the pending left word already has to consume gaps.
    """
    targets, owner = link_tables(pair)
    M, N = len(pair.left), len(pair.right)
    unaligned = [j for j in range(1, N + 1) if owner[j] == 0]
    filled = [False] * (N + 2)
    gap = 1
    next_left = 1
    next_eps = 0
    for b in seq:
        if b.left is EPS:
            if next_eps >= len(unaligned) or len(b.right) != 1:
                return False
            q = unaligned[next_eps]
            if b.right[0] != pair.right[q - 1]:
                return False
            # empty-left words take the first gap, and only once the pending
            # left word (if any) is one that needs right positions
            if q != gap or (next_left <= M and not targets[next_left]) or b.offsets != (0,):
                return False
            next_eps += 1
            filled[q] = True
        else:
            if next_left > M or b.left != pair.left[next_left - 1]:
                return False
            tm = targets[next_left]
            if b.right != tuple(pair.right[j - 1] for j in tm):
                return False
            if tm and gap <= N and owner[gap] == 0:
                return False
            k = gap
            offsets = []
            for j in tm:
                offsets.append(j - k)
                k = j + 1
            if b.offsets != tuple(offsets):
                return False
            for j in tm:
                filled[j] = True
            next_left += 1
        while gap <= N and filled[gap]:
            gap += 1
    return next_left == M + 1 and next_eps == len(unaligned)


def split_sentences(corpus: Iterable[Biword]) -> Iterator[list[Biword]]:
    """Split a flattened corpus at its end-of-sentence biwords."""
    current = []
    for b in corpus:
        if b == EOS:
            yield current
            current = []
        else:
            current.append(b)
    if current:
        raise CorruptSequenceError("corpus does not end with an end-of-sentence biword")


def join_sentences(sentences: Iterable[Sequence[Biword]]) -> list[Biword]:
    out = []
    for s in sentences:
        out.extend(s)
        out.append(EOS)
    return out


def corpus_texts(corpus: Iterable[Biword]) -> tuple[list[list[str]], list[list[str]]]:
    """Left and right token lines restored from a flattened corpus."""
    left, right = [], []
    for s in split_sentences(corpus):
        left.append(restore_left(s))
        right.append(restore_right(s))
    return left, right


def format_biword(b: Biword) -> str:
    """One line of the ``extract --dump`` format."""
    if b == EOS:
        return "<eos> ||| <eos> ||| 0"
    left = "<eps>" if b.left is EPS else b.left
    return f"{left} ||| {' '.join(b.right)} ||| {' '.join(map(str, b.offsets))}"


def parse_biword(line: str) -> Biword:
    parts = [p.strip() for p in line.split("|||")]
    if len(parts) != 3:
        raise ValueError(f"not a biword line: {line!r}")
    if parts[0] == "<eos>":
        return EOS
    left = EPS if parts[0] == "<eps>" else parts[0]
    right = tuple(parts[1].split())
    offsets = tuple(int(x) for x in parts[2].split())
    return Biword(left, right, offsets)
