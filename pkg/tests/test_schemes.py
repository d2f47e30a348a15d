import math
import random
from collections import Counter

import pytest
from hypothesis import given

from gbw.bitext import AlignedBitext, SentencePair
from gbw.biwords import (
    EOS,
    EPS,
    ShiftClass,
    classify_shift,
    corpus_texts,
    extract_biwords,
    join_sentences,
    pair_from_biwords,
    split_sentences,
)
from gbw.errors import SchemeError
from gbw.schemes import (
    SCHEMES,
    Pruner,
    build_corpus,
    golden_section_min,
    link_frequencies,
    monotonize_pair,
    optimize_delta,
    prune_biwords,
    search_delta,
    simplify_pair,
    to_monotonic_11,
    to_simple,
)
from strategies import bitexts, random_bitext


def reference_prune(corpus, delta, scheme=None):
    """Straightforward pruning over sentence pairs, recounting every round."""
    freqs = link_frequencies(corpus)
    pairs = [pair_from_biwords(s) for s in split_sentences(corpus)]
    while True:
        counts = Counter(b for p in pairs for b in extract_biwords(p))
        weak = {b for b, c in counts.items() if c <= delta and b.left is not EPS and b.right}
        if not weak:
            return join_sentences(extract_biwords(p) for p in pairs)
        new_pairs = []
        for p in pairs:
            links = set(p.links)
            touched = set()
            i = 0
            for b in extract_biwords(p):
                if b.left is EPS:
                    continue
                i += 1
                if b in weak:
                    tm = sorted(j for a, j in p.links if a == i)
                    w = min(tm, key=lambda j: (freqs.get((p.left[i - 1], p.right[j - 1]), 0), j))
                    links.discard((i, w))
                    touched.add(i)
            q = SentencePair(p.left, p.right, links)
            if touched and scheme == "1ton-simple":
                q = simplify_pair(q, freqs)
            elif touched and scheme == "1to1-mono":
                q = monotonize_pair(q)
            new_pairs.append(q)
        pairs = new_pairs


def one_to_one(bt):
    pairs = []
    for p in bt:
        seen = set()
        links = set()
        for i, j in sorted(p.links, key=lambda t: t[1]):
            if i not in seen:
                seen.add(i)
                links.add((i, j))
        pairs.append(SentencePair(p.left, p.right, links))
    return AlignedBitext(pairs)


def shift_classes(corpus):
    return {classify_shift(b) for b in corpus}


def test_unknown_scheme():
    with pytest.raises(ValueError):
        build_corpus(AlignedBitext([]), "1to2")


def test_one_to_one_schemes_reject_fan_out():
    bt = AlignedBitext([SentencePair(("a",), ("x", "y"), {(1, 1), (1, 2)})])
    for scheme in ("1to1-mono", "1to1-nonmono"):
        with pytest.raises(SchemeError):
            build_corpus(bt, scheme)
    with pytest.raises(SchemeError):
        to_monotonic_11(extract_biwords(bt[0]))


@given(bitexts())
def test_every_scheme_restores_the_texts(bt):
    expected = ([list(p.left) for p in bt], [list(p.right) for p in bt])
    for scheme in ("1ton-complex", "1ton-simple"):
        assert corpus_texts(build_corpus(bt, scheme)) == expected
    bt1 = one_to_one(bt)
    for scheme in ("1to1-mono", "1to1-nonmono"):
        assert corpus_texts(build_corpus(bt1, scheme)) == expected


@given(bitexts())
def test_scheme_shapes(bt):
    simple = build_corpus(bt, "1ton-simple")
    assert ShiftClass.COMPLEX_SHIFT not in shift_classes(simple)
    bt1 = one_to_one(bt)
    nonmono = build_corpus(bt1, "1to1-nonmono")
    mono = build_corpus(bt1, "1to1-mono")
    assert all(len(b.right) <= 1 for b in nonmono + mono)
    assert shift_classes(mono) <= {ShiftClass.NO_SHIFT}
    assert all(b.offsets == (0,) or not b.offsets for b in mono)


@given(bitexts())
def test_unpaired_ordering(bt):
    def unpaired(c):
        return sum(1 for b in c if b != EOS and b.unpaired)
    assert unpaired(build_corpus(bt, "1ton-complex")) <= unpaired(build_corpus(bt, "1ton-simple"))
    bt1 = one_to_one(bt)
    assert unpaired(build_corpus(bt1, "1to1-nonmono")) <= unpaired(build_corpus(bt1, "1to1-mono"))


def test_to_simple_drops_the_weakest_link():
    # l1 -> r1, r3 with r1 rarely linked to l1 elsewhere
    pair = SentencePair(("a", "b"), ("x", "y", "z"), {(1, 1), (1, 3), (2, 2)})
    freqs = {("a", "x"): 1, ("a", "z"): 5, ("b", "y"): 3}
    out = to_simple(extract_biwords(pair), freqs)
    assert ShiftClass.COMPLEX_SHIFT not in shift_classes(out)
    assert [b.right for b in out if b.left == "a"] == [("z",)]


def test_thread_count_does_not_change_output(monkeypatch):
    rng = random.Random(5)
    bt = AlignedBitext([p for _ in range(700) for p in random_bitext(rng).pairs])
    single = build_corpus(bt, "1ton-complex", threads=1)
    assert build_corpus(bt, "1ton-complex", threads=2) == single
    monkeypatch.setenv("GBW_THREADS", "junk")
    assert build_corpus(bt, "1ton-complex") == single


def _corpora(seed, n=60):
    rng = random.Random(seed)
    for _ in range(n):
        bt = random_bitext(rng, max_sentences=6)
        yield "1ton-complex", bt
        yield "1ton-simple", bt
        bt1 = one_to_one(bt)
        yield "1to1-nonmono", bt1
        yield "1to1-mono", bt1


def test_pruning_matches_reference():
    for scheme, bt in _corpora(1):
        corpus = build_corpus(bt, scheme)
        pruner = Pruner(corpus, scheme=scheme)
        for delta in (1, 2, 3, 5):
            assert pruner.prune(delta) == reference_prune(corpus, delta, scheme)


def test_pruning_postconditions():
    for scheme, bt in _corpora(2):
        corpus = build_corpus(bt, scheme)
        texts = corpus_texts(corpus)
        for delta in (1, 3):
            out = prune_biwords(corpus, delta, scheme=scheme)
            assert corpus_texts(out) == texts
            counts = Counter(b for b in out if b != EOS)
            for b, c in counts.items():
                if b.left is not EPS and b.right:
                    assert c > delta
            if scheme == "1ton-simple":
                assert ShiftClass.COMPLEX_SHIFT not in shift_classes(out)
            if scheme == "1to1-mono":
                assert shift_classes(out) <= {ShiftClass.NO_SHIFT}


def test_prune_zero_is_identity_and_negative_rejected():
    corpus = build_corpus(random_bitext(random.Random(0)), "1ton-complex")
    assert prune_biwords(corpus, 0) == corpus
    with pytest.raises(ValueError):
        prune_biwords(corpus, -1)


def test_pruner_is_reusable_in_any_order():
    corpus = build_corpus(random_bitext(random.Random(9), max_sentences=8), "1ton-complex")
    p = Pruner(corpus)
    a = [p.prune(d) for d in (3, 1, 2)]
    q = Pruner(corpus)
    b = [q.prune(d) for d in (1, 2, 3)]
    assert a == [b[2], b[0], b[1]]


def test_optimize_delta_never_worse_than_no_pruning():
    for scheme, bt in list(_corpora(4, n=15)):
        corpus = build_corpus(bt, scheme)
        sizes = {}

        def size(c):
            key = tuple(c)
            sizes[key] = len({b for b in c}) * 10 + sum(len(b.offsets) for b in c)
            return sizes[key]

        d = optimize_delta(corpus, size, scheme=scheme)
        best = size(prune_biwords(corpus, d, scheme=scheme) if d else corpus)
        assert best <= size(corpus)


def test_golden_section_matches_exhaustive_on_unimodal_functions():
    rng = random.Random(8)
    for _ in range(300):
        lo = rng.randint(0, 5)
        hi = lo + rng.randint(0, 3000)
        c = rng.randint(lo, hi)
        scale = rng.choice([1, 3, 100])
        calls = []

        def f(x):
            calls.append(x)
            return abs(x - c) * scale + (x < c)

        got = golden_section_min(f, lo, hi)
        assert len(set(calls)) <= 1.5 * math.log2(hi - lo + 2) + 6
        assert got == c == min(range(lo, hi + 1), key=f)


def test_golden_section_plateau_ties_go_left():
    assert golden_section_min(lambda x: max(0, 50 - x), 1, 1000) == 50
    assert golden_section_min(lambda x: 5, 1, 1000) == 1


def test_search_delta_probes_logarithmically():
    corpus = build_corpus(AlignedBitext([SentencePair(("a",), ("x",), {(1, 1)})] * 1000),
                          "1ton-complex")
    probes = []

    def compressor(c):
        probes.append(c)
        return len(c)

    d, pruner, out = search_delta(corpus, compressor)
    assert d == 0 and out == len(corpus)  # pruning only adds unpaired biwords here
    assert len(probes) <= 1 + 1.5 * math.log2(1000) + 6


def test_ties_prefer_the_smaller_threshold():
    corpus = build_corpus(random_bitext(random.Random(2), max_sentences=6), "1ton-complex")
    assert optimize_delta(corpus, lambda c: 7) == 0


def test_all_schemes_listed():
    assert set(SCHEMES) == {"1to1-mono", "1to1-nonmono", "1ton-simple", "1ton-complex"}
