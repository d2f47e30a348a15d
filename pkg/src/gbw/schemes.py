"""Extraction schemes, infrequent-biword pruning and threshold search.

Every transform here works on alignments and re-runs extraction, so the
resulting sequences are always in canonical order and restore the same
texts as their input.
"""

from __future__ import annotations

import gc
import logging
import math
import os
from collections import Counter
from contextlib import contextmanager
from typing import Callable, Iterable, Mapping, Sequence

from .bitext import AlignedBitext, SentencePair
from .biwords import (
    EOS,
    EPS,
    Biword,
    extract_biwords,
    extract_from_tables,
    link_tables,
    join_sentences,
    pair_from_biwords,
    split_sentences,
)
from .errors import SchemeError

log = logging.getLogger(__name__)

SCHEMES = ("1to1-mono", "1to1-nonmono", "1ton-simple", "1ton-complex")
ONE_TO_ONE = ("1to1-mono", "1to1-nonmono")


@contextmanager
def paused_gc():
    """Suspend the cyclic collector.  The passes here allocate millions of
    small acyclic tuples, and each full collection walks all of them."""
    enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if enabled:
            gc.enable()


def link_frequencies(corpus: Iterable[Biword]) -> Counter:
    """Corpus counts of (left word, right word) links."""
    counts = Counter()
    for b in corpus:
        if b.left is EPS or b == EOS:
            continue
        for w in b.right:
            counts[(b.left, w)] += 1
    return counts


def pair_link_frequencies(pairs: Iterable[SentencePair]) -> Counter:
    counts = Counter()
    for p in pairs:
        for i, j in p.links:
            counts[(p.left[i - 1], p.right[j - 1])] += 1
    return counts


def _targets(links) -> dict:
    by_left = {}
    for i, j in links:
        by_left.setdefault(i, []).append(j)
    for t in by_left.values():
        t.sort()
    return by_left


def _weakest(pair: SentencePair, i: int, positions: Sequence[int], freqs: Mapping) -> int:
    # lowest corpus frequency, ties to the smallest right index
    word = pair.left[i - 1]
    return min(positions, key=lambda j: (freqs.get((word, pair.right[j - 1]), 0), j))


def _simplify_links(pair: SentencePair, freqs: Mapping, only=None) -> frozenset:
    links = set(pair.links)
    for i, tm in _targets(pair.links).items():
        if only is not None and i not in only:
            continue
        tm = list(tm)
        while tm[-1] - tm[0] + 1 != len(tm):
            j = _weakest(pair, i, tm, freqs)
            tm.remove(j)
            links.discard((i, j))
    return frozenset(links)


def simplify_pair(pair: SentencePair, freqs: Mapping) -> SentencePair:
    """Drop weakest links until every left word covers a contiguous run."""
    return SentencePair(pair.left, pair.right, _simplify_links(pair, freqs))


def to_simple(seq: Sequence[Biword], freqs: Mapping) -> list[Biword]:
    """Split biwords with complex shifts into simple-shift and unpaired biwords."""
    return extract_biwords(simplify_pair(pair_from_biwords(seq), freqs))


def monotonize_pair(pair: SentencePair) -> SentencePair:
    """Unlink shifted words one at a time until no biword carries an offset."""
    links = set(pair.links)
    current = pair
    while True:
        bws = extract_biwords(current)
        left_index = 0
        shifted = None
        for b in bws:
            if b.left is not EPS:
                left_index += 1
                if b.has_shift:
                    shifted = left_index
                    break
        if shifted is None:
            return current
        links = {(i, j) for i, j in links if i != shifted}
        current = SentencePair(pair.left, pair.right, links)


def to_monotonic_11(seq: Sequence[Biword]) -> list[Biword]:
    """Replace every shifted one-to-one biword by two unpaired biwords."""
    for b in seq:
        if len(b.right) > 1 and b.left is not EPS:
            raise SchemeError(f"biword {b!r} has more than one right word; 1:1 scheme required")
    return extract_biwords(monotonize_pair(pair_from_biwords(seq)))


def _check_one_to_one(pair: SentencePair, lineno: int) -> None:
    seen = set()
    for i, _ in pair.links:
        if i in seen:
            raise SchemeError(
                f"sentence {lineno}: left word {i} has several links; one-to-one "
                "schemes need intersected alignments")
        seen.add(i)


def _scheme_pairs(bitext: AlignedBitext, scheme: str) -> list[SentencePair]:
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    pairs = list(bitext.pairs)
    if scheme in ONE_TO_ONE:
        for n, p in enumerate(pairs, 1):
            _check_one_to_one(p, n)
    if scheme == "1ton-simple":
        freqs = pair_link_frequencies(pairs)
        pairs = [simplify_pair(p, freqs) for p in pairs]
    elif scheme == "1to1-mono":
        pairs = [monotonize_pair(p) for p in pairs]
    return pairs


def _thread_count() -> int:
    raw = os.environ.get("GBW_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_corpus(bitext: AlignedBitext, scheme: str = "1ton-complex",
                 threads: int | None = None) -> list[Biword]:
    """Flattened biword corpus (EOS after every sentence) for one scheme.

    One-to-one schemes expect ``bitext`` to carry intersected alignments.
    ``threads`` (default: ``GBW_THREADS``) caps the worker processes used
    for extraction; output order never depends on it.
    """
    pairs = _scheme_pairs(bitext, scheme)
    threads = _thread_count() if threads is None else threads
    if threads > 1 and len(pairs) > 2000:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=threads) as pool:
            sentences = list(pool.map(extract_biwords, pairs, chunksize=512))
    else:
        with paused_gc():
            sentences = [extract_biwords(p) for p in pairs]
    return join_sentences(sentences)


def _normalizer(scheme: str | None, freqs: Mapping) -> Callable[[SentencePair, set], SentencePair]:
    if scheme == "1ton-simple":
        return lambda p, touched: SentencePair(p.left, p.right,
                                              _simplify_links(p, freqs, only=touched))
    if scheme == "1to1-mono":
        return lambda p, touched: monotonize_pair(p)
    return lambda p, touched: p


def _simplify_tables(left, right, targets, owner, freqs, touched) -> None:
    for i in touched:
        tm = targets[i]
        word = left[i - 1]
        while tm and tm[-1] - tm[0] + 1 != len(tm):
            j = min(tm, key=lambda j: (freqs.get((word, right[j - 1]), 0), j))
            tm.remove(j)
            owner[j] = 0


def _monotonize_tables(left, right, targets, owner) -> list[Biword]:
    while True:
        bws = extract_from_tables(left, right, targets, owner)
        i = 0
        shifted = 0
        for b in bws:
            if b.left is not EPS:
                i += 1
                if b.has_shift:
                    shifted = i
                    break
        if not shifted:
            return bws
        for j in targets[shifted]:
            owner[j] = 0
        targets[shifted] = []


class Pruner:
    """Prunes one corpus at any number of thresholds, sharing the work
    that does not depend on the threshold."""

    def __init__(self, corpus: Sequence[Biword], freqs: Mapping | None = None,
                 scheme: str | None = None):
        self.corpus = list(corpus)
        self.freqs = link_frequencies(corpus) if freqs is None else freqs
        self.scheme = scheme
        self.sentences = list(split_sentences(self.corpus))
        # biword types are interned to ids, so the bookkeeping below hashes
        # small ints instead of nested tuples
        self._index: dict = {}
        self._types: list[Biword] = []
        self._prunable: list[bool] = []
        self.ids = [self._intern(s) for s in self.sentences]
        # only linked biwords can be weak, so only they are counted and
        # indexed by the sentences holding them
        prunable = self._prunable
        counts = [0] * len(self._types)
        where = {}
        for k, ids in enumerate(self.ids):
            for t in ids:
                if prunable[t]:
                    counts[t] += 1
                    where.setdefault(t, []).append(k)
        self.counts = counts
        self.where = where
        self._tables: list = [None] * len(self.sentences)

    @property
    def max_count(self) -> int:
        return max(self.counts, default=0)

    def _intern(self, biwords) -> list[int]:
        index, types, prunable = self._index, self._types, self._prunable
        out = []
        for b in biwords:
            t = index.get(b)
            if t is None:
                t = index[b] = len(types)
                types.append(b)
                prunable.append(_prunable(b))
            out.append(t)
        return out

    def _base_tables(self, k):
        if self._tables[k] is None:
            pair = pair_from_biwords(self.sentences[k])
            self._tables[k] = (pair.left, pair.right) + link_tables(pair)
        return self._tables[k]

    def _weak(self, counts, delta):
        return {t for t, c in enumerate(counts) if 0 < c <= delta}

    def prune(self, delta: int) -> list[Biword]:
        if delta < 0:
            raise ValueError("delta must be non-negative")
        if delta == 0:
            return list(self.corpus)
        with paused_gc():
            return self._prune(delta)

    def _prune(self, delta):
        freqs = self.freqs
        scheme = self.scheme
        prunable = self._prunable
        sentences = list(self.sentences)
        sids = list(self.ids)
        tables = {}
        counts = list(self.counts)
        where = self.where
        extra = {}  # where types sit in rewritten sentences
        weak = self._weak(counts, delta)
        while weak:
            hit = set()
            for t in weak:
                hit.update(where.get(t, ()))
                hit.update(extra.get(t, ()))
            changed = []
            for k in sorted(hit):
                ids = sids[k]
                if weak.isdisjoint(ids):
                    continue
                if k in tables:
                    left, right, targets, owner = tables[k]
                else:
                    left, right, targets, owner = self._base_tables(k)
                    targets = [list(t) for t in targets]
                    owner = list(owner)
                    tables[k] = (left, right, targets, owner)
                touched = []
                i = 0
                for b, t in zip(sentences[k], ids):
                    if b[0] is EPS:
                        continue
                    i += 1
                    if t in weak:
                        tm = targets[i]
                        if len(tm) == 1:
                            j = tm.pop()
                        else:
                            word = left[i - 1]
                            j = min(tm, key=lambda j: (freqs.get((word, right[j - 1]), 0), j))
                            tm.remove(j)
                        owner[j] = 0
                        touched.append(i)
                if scheme == "1to1-mono":
                    new = _monotonize_tables(left, right, targets, owner)
                else:
                    if scheme == "1ton-simple":
                        _simplify_tables(left, right, targets, owner, freqs, touched)
                    new = extract_from_tables(left, right, targets, owner)
                new_ids = self._intern(new)
                if len(counts) < len(prunable):
                    counts.extend([0] * (len(prunable) - len(counts)))
                for t in ids:
                    if prunable[t]:
                        counts[t] -= 1
                for t in new_ids:
                    if prunable[t]:
                        counts[t] += 1
                sentences[k] = new
                sids[k] = new_ids
                changed.append(k)
            if not changed:
                break
            for k in changed:
                for t in sids[k]:
                    if prunable[t]:
                        extra.setdefault(t, set()).add(k)
            weak = self._weak(counts, delta)
        return join_sentences(sentences)


def _prunable(b) -> bool:
    return b != EOS and b.left is not EPS and bool(b.right)


def prune_biwords(corpus: Sequence[Biword], delta: int, freqs: Mapping | None = None,
                  scheme: str | None = None) -> list[Biword]:
    """Split biword types seen at most ``delta`` times.

    Each round removes, from every occurrence of such a type, its least
    frequent link.  The removed right word becomes an unpaired biword.
    Rounds repeat until every linked biword type is more frequent than
    ``delta``.  For the ``1ton-simple`` and ``1to1-mono`` schemes the
    touched sentences are re-normalised so the output stays in-scheme.
    """
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if delta == 0:
        return list(corpus)
    return Pruner(corpus, freqs, scheme).prune(delta)


def optimize_delta(corpus: Sequence[Biword], compressor: Callable[[Sequence[Biword]], object],
                   freqs: Mapping | None = None, scheme: str | None = None) -> int:
    """Pruning threshold that minimises the compressed size.

    ``compressor`` maps a corpus to its archive (anything with ``len``, or
    an int size).  The threshold is found by a ternary search over
    ``[1, max biword frequency]`` that reuses interior probes (golden
    section); ``delta = 0`` is always a candidate and ties go to the
    smaller threshold.
    """
    return search_delta(corpus, compressor, freqs, scheme)[0]


def search_delta(corpus, compressor, freqs=None, scheme=None) -> tuple[int, Pruner, object]:
    """:func:`optimize_delta`, also returning the :class:`Pruner` and the
    compressor's output for the chosen threshold, so the caller need not
    prune and compress that corpus a second time."""
    with paused_gc():
        pruner = Pruner(corpus, freqs, scheme)
        delta, out = _golden_search(corpus, compressor, pruner)
        return delta, pruner, out


def golden_section_min(f: Callable[[int], int], lo: int, hi: int) -> int:
    """Argmin of ``f`` over the integers ``[lo, hi]`` for unimodal ``f``,
    ties to the smaller argument.  One interior probe carries over to the
    next bracket, so about 1.44 log2(hi - lo) values are evaluated."""
    memo = {}

    def g(x):
        if x not in memo:
            memo[x] = f(x)
        return memo[x]

    inv_phi = (math.sqrt(5) - 1) / 2
    m1 = m2 = None
    while hi - lo > 3:
        if m1 is None:
            m1 = hi - int(round((hi - lo) * inv_phi))
        if m2 is None:
            m2 = lo + int(round((hi - lo) * inv_phi))
        if not lo < m1 < m2 < hi:
            m1, m2 = lo + (hi - lo) // 3, hi - (hi - lo) // 3
        if g(m1) <= g(m2):
            hi, m2, m1 = m2, m1, None
        else:
            lo, m1, m2 = m1, m2, None
    return min(range(lo, hi + 1), key=lambda x: (g(x), x))


def _golden_search(corpus, compressor, pruner):
    memo = {}
    # keep the outputs of delta = 0 and of the smallest probe so far only
    kept = {}

    # thresholds that prune to the same corpus share one compressor run
    first = {}

    def cost(d):
        if d not in memo:
            pruned = pruner.prune(d) if d else corpus
            key = tuple(pruned)
            if key in first:
                d0 = first[key]
                memo[d], out = memo[d0], kept.get(d0)
            else:
                first[key] = d
                out = compressor(pruned)
                memo[d] = out if isinstance(out, int) else len(out)
            log.debug("delta=%d size=%d", d, memo[d])
            if d == 0:
                kept[0] = out
            else:
                top = next((k for k in kept if k), None)
                if top is None or (memo[d], d) < (memo[top], top):
                    kept.pop(top, None)
                    kept[d] = out
        return memo[d]

    cost(0)
    if not pruner.max_count:
        return 0, kept[0]
    best = golden_section_min(cost, 1, pruner.max_count)
    best = best if cost(best) < cost(0) else 0
    if kept.get(best) is None:
        kept[best] = compressor(pruner.prune(best))
    return best, kept[best]
