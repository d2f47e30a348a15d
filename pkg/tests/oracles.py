"""Brute-force references the library is checked against."""

import itertools

from gbw.bitext import AlignedBitext, SentencePair
from gbw.biwords import pair_from_biwords, split_sentences


def brute_force_place(biwords):
    """Absolute positions by scanning for free slots one by one."""
    filled = {}
    for b in biwords:
        gap = 1
        while gap in filled:
            gap += 1
        pos = gap - 1
        for w, off in zip(b.right, b.offsets):
            pos = pos + 1 + off
            assert pos not in filled
            filled[pos] = w
    n = max(filled, default=0)
    return [filled[k] for k in range(1, n + 1)]


def brute_force_spot(pairs, words):
    """(sentence, start, right highlights) for every contiguous run of
    ``words`` in the left sentences, highlights taken from the links."""
    out = set()
    words = tuple(words)
    n = len(words)
    first = words[0]
    for k, pair in enumerate(pairs):
        left = tuple(pair.left)
        for start in range(len(left) - n + 1):
            if left[start] == first and left[start:start + n] == words:
                lefts = set(range(start + 1, start + n + 1))
                hl = tuple(sorted(j - 1 for i, j in pair.links if i in lefts))
                out.add((k, start, hl))
    return out


def corpus_pairs(corpus):
    return [pair_from_biwords(s) for s in split_sentences(corpus)]


def spotted(hits):
    return {(o.sentence, o.left_span[0], o.right_highlights) for o in hits}


def exhaustive_huffman_cost(freqs):
    """Minimum total bits over every length assignment meeting Kraft.

    Sorting lengths against decreasing frequency loses nothing, so
    multisets of lengths are enough."""
    live = sorted((f for f in freqs if f), reverse=True)
    n = len(live)
    if n == 1:
        return live[0]
    best = None
    for ls in itertools.combinations_with_replacement(range(1, n), n):
        if sum(2.0 ** -l for l in ls) <= 1:
            cost = sum(f * l for f, l in zip(live, ls))
            best = cost if best is None else min(best, cost)
    return best


def naive_rank(bits, i):
    return sum(bits[:i])


def naive_select(bits, j):
    seen = 0
    for k, b in enumerate(bits, 1):
        seen += b
        if b and seen == j:
            return k
    raise IndexError


def one_to_one(bt):
    """Keep, per left word, only its link to the leftmost right word."""
    pairs = []
    for p in bt:
        seen, links = set(), set()
        for i, j in sorted(p.links, key=lambda t: t[1]):
            if i not in seen:
                seen.add(i)
                links.add((i, j))
        pairs.append(SentencePair(p.left, p.right, links))
    return AlignedBitext(pairs)
