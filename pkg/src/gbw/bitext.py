"""Loading and normalising sentence-aligned, word-aligned bitexts.

Text files hold one sentence per line (UTF-8, LF).  Alignment files use
the Pharaoh convention: whitespace separated ``i-j`` pairs with 0-based
indices, one line per sentence pair.  Internally links are 1-based
``(i, j)`` tuples, ``i`` indexing the left sentence and ``j`` the right one.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (
    AlignmentBoundsError,
    AlignmentError,
    InputFormatError,
    LineCountMismatch,
    OneToManyError,
)

Link = tuple[int, int]

RESOLVE_MODES = (None, "keep-first")


@dataclass(frozen=True)
class SentencePair:
    left: tuple[str, ...]
    right: tuple[str, ...]
    links: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))
        object.__setattr__(self, "links", frozenset(self.links))

    def validate(self) -> None:
        """Raise :class:`AlignmentError` unless the pair is a one-to-many bigraph."""
        M, N = len(self.left), len(self.right)
        owner = {}
        for i, j in self.links:
            if not (1 <= i <= M and 1 <= j <= N):
                raise AlignmentBoundsError(f"link ({i}, {j}) outside {M}x{N} sentence pair")
            if owner.setdefault(j, i) != i:
                raise OneToManyError(f"right word {j} aligned with left words {owner[j]} and {i}")


@dataclass(frozen=True)
class AlignedBitext:
    pairs: tuple[SentencePair, ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __getitem__(self, k):
        return self.pairs[k]

    @property
    def left_lines(self) -> list[tuple[str, ...]]:
        return [p.left for p in self.pairs]

    @property
    def right_lines(self) -> list[tuple[str, ...]]:
        return [p.right for p in self.pairs]


def _decode(raw, line=None):
    if isinstance(raw, str):
        return raw
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise InputFormatError(f"invalid UTF-8 ({exc.reason})", line=line) from None


def tokenize_line(raw, line: int | None = None) -> tuple[str, ...]:
    """Lowercase and split a sentence into tokens.

    Every character that is neither alphanumeric nor whitespace becomes a
    token of its own; the rest is split on runs of whitespace.

    >>> tokenize_line(b"La casa.")
    ('la', 'casa', '.')
    """
    text = _decode(raw, line)
    if "\n" in text:
        raise InputFormatError("embedded newline", line=line)
    if "\x00" in text:
        raise InputFormatError("NUL byte in text", line=line)
    text = text.lower()
    spaced = "".join(ch if ch.isalnum() or ch.isspace() else f" {ch} " for ch in text)
    return tuple(spaced.split())


def parse_alignment_line(raw, M: int, N: int, resolve: str | None = None,
                         line: int | None = None) -> frozenset:
    """Parse one Pharaoh alignment line into a set of 1-based links.

    ``resolve="keep-first"`` keeps, for every right word linked to several
    left words, only the link with the smallest left index instead of
    raising :class:`OneToManyError`.
    """
    if resolve not in RESOLVE_MODES:
        raise ValueError(f"unknown resolve mode {resolve!r}")
    text = _decode(raw, line)
    links = set()
    for item in text.split():
        a, sep, b = item.partition("-")
        if not sep or not a.isdigit() or not b.isdigit() or not a.isascii() or not b.isascii():
            raise AlignmentError(f"malformed alignment item {item!r}", line=line)
        i, j = int(a), int(b)
        if i >= M or j >= N:
            raise AlignmentBoundsError(
                f"alignment item {item!r} outside sentence lengths ({M}, {N})", line=line)
        links.add((i + 1, j + 1))
    owner = {}
    for i, j in sorted(links):
        if j in owner:
            if resolve is None:
                raise OneToManyError(
                    f"right word {j - 1} aligned with left words {owner[j] - 1} and {i - 1}",
                    line=line)
            continue
        owner[j] = i
    return frozenset((i, j) for j, i in owner.items())


def intersect_alignments(forward: Iterable[Link], reverse: Iterable[Link]) -> frozenset:
    """Links present in both directions.

    ``reverse`` comes from aligning with the texts exchanged, so its pairs
    are ``(right index, left index)``.
    """
    rev = set(reverse)
    return frozenset((i, j) for i, j in forward if (j, i) in rev)


def _read_lines(path) -> list[bytes]:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise InputFormatError(f"cannot read: {exc.strerror}", path=path) from None
    if not data:
        return []
    lines = data.split(b"\n")
    if lines[-1] == b"":
        lines.pop()
    return lines


def load_bitext(left_path, right_path, align_path, reverse_align_path=None,
                resolve: str | None = None) -> AlignedBitext:
    """Read, tokenise and validate a word-aligned bitext.

    With ``reverse_align_path`` the links are the intersection of both
    alignment directions, which makes them one-to-one.
    """
    files = [left_path, right_path, align_path]
    if reverse_align_path is not None:
        files.append(reverse_align_path)
    contents = [_read_lines(p) for p in files]
    counts = [len(c) for c in contents]
    if len(set(counts)) != 1:
        detail = ", ".join(f"{os.fspath(p)}={n}" for p, n in zip(files, counts))
        raise LineCountMismatch(f"line counts differ: {detail}")

    pairs = []
    for k in range(counts[0]):
        lineno = k + 1
        try:
            left = tokenize_line(contents[0][k])
        except InputFormatError as exc:
            raise InputFormatError(f"left text: {exc}", line=lineno, path=left_path) from None
        try:
            right = tokenize_line(contents[1][k])
        except InputFormatError as exc:
            raise InputFormatError(f"right text: {exc}", line=lineno, path=right_path) from None
        M, N = len(left), len(right)
        try:
            links = parse_alignment_line(contents[2][k], M, N, resolve)
        except AlignmentError as exc:
            raise type(exc)(str(exc), line=lineno, path=align_path) from None
        if reverse_align_path is not None:
            try:
                rev = parse_alignment_line(contents[3][k], N, M, resolve)
            except AlignmentError as exc:
                raise type(exc)(str(exc), line=lineno, path=reverse_align_path) from None
            links = intersect_alignments(links, rev)
        pairs.append(SentencePair(left, right, links))
    return AlignedBitext(pairs)


def normalized_lines(lines: Sequence[Sequence[str]]) -> bytes:
    """The normalised text file for a list of token lines."""
    return "".join(" ".join(toks) + "\n" for toks in lines).encode("utf-8")


def normalized_size(bitext_or_lines) -> int:
    """Bytes of the normalised left plus right files (the ratio denominator)."""
    if isinstance(bitext_or_lines, AlignedBitext):
        left, right = bitext_or_lines.left_lines, bitext_or_lines.right_lines
    else:
        left, right = bitext_or_lines
    return len(normalized_lines(left)) + len(normalized_lines(right))


def format_alignment(links: Iterable[Link]) -> str:
    """Render 1-based links as a 0-based Pharaoh line."""
    return " ".join(f"{i - 1}-{j - 1}" for i, j in sorted(links))
