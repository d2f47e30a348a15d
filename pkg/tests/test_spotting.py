import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fixtures import FIG_BITEXT
from gbw.archive import api
from gbw.archive.container import Archive
from gbw.bitext import AlignedBitext, SentencePair
from gbw.biwords import EPS
from gbw.codecs.etdc import etdc_code, etdc_decode_all
from gbw.errors import CorruptArchiveError
from gbw.spotting import (
    LoadedArchive,
    find_left_codeword,
    kmp_search,
    reconstruct_context,
    resolve_offsets,
    scan_sigma_b,
    set_horspool,
    spot,
)
from oracles import brute_force_spot, corpus_pairs, spotted
from strategies import random_bitext


def loaded(bt, scheme="1ton-complex"):
    return LoadedArchive(api.compress(bt, "s2lcab", scheme).data)


def naive_codeword_hits(stream: bytes, patterns):
    ends = np.flatnonzero(np.frombuffer(stream, dtype=np.uint8) >= 0x80)
    pats = set(patterns)
    out, start = [], 0
    for e in ends.tolist():
        if stream[start:e + 1] in pats:
            out.append(e + 1)
        start = e + 1
    return out


# --- string matching --------------------------------------------------------

@given(st.binary(max_size=400), st.binary(min_size=1, max_size=4))
def test_kmp_matches_naive(text, pattern):
    naive = [i + len(pattern) - 1 for i in range(len(text) - len(pattern) + 1)
             if text[i:i + len(pattern)] == pattern]
    assert kmp_search(text, pattern).tolist() == naive


@given(st.lists(st.integers(0, 20000), max_size=300),
       st.lists(st.integers(0, 20000), min_size=1, max_size=6))
def test_set_horspool_matches_naive_codeword_scan(ranks, pattern_ranks):
    stream = b"".join(etdc_code(r) for r in ranks)
    # patterns drawn from the stream as well as at random
    if ranks:
        pattern_ranks = pattern_ranks + ranks[: len(ranks) // 50 + 1]
    patterns = [etdc_code(r) for r in pattern_ranks]
    assert set_horspool(stream, patterns) == naive_codeword_hits(stream, patterns)


def test_set_horspool_rejects_misaligned_matches():
    # 0x80 is a full codeword, but also the tail of the codeword 0x05 0x80
    stream = bytes([0x80, 0x05, 0x80, 0x80])
    assert set_horspool(stream, [b"\x80"]) == [1, 4]
    assert set_horspool(stream, [b"\x05\x80"]) == [3]
    with pytest.raises(ValueError):
        set_horspool(stream, [b""])


# --- the fixture ------------------------------------------------------------

def test_fixture_queries():
    la = loaded(FIG_BITEXT)
    [occ] = spot("casa", la)
    assert occ.left_span == (4, 5)
    assert [occ.right[j] for j in occ.right_highlights] == ["house"]
    [occ] = spot("la casa", la)
    assert [occ.right[j] for j in occ.right_highlights] == ["the", "house"]
    assert occ.sentence == 0
    assert spot("zzz", la) == []
    assert spot("casa la", la) == []
    [occ] = spot("prefiero", la)
    assert [occ.right[j] for j in occ.right_highlights] == ["i", "like"]
    [occ] = spot("que", la)
    assert occ.right_highlights == ()


def test_offsets_resolve_from_the_stream():
    la = loaded(FIG_BITEXT)
    [occ] = spot("casa", la)
    assert resolve_offsets(occ.byte_position, 1, la) == (1,)
    [occ] = spot("prefiero", la)
    assert resolve_offsets(occ.byte_position, 2, la) == (0, 1)
    ctx = reconstruct_context(occ.byte_position, la)
    assert ctx.left == FIG_BITEXT[0].left and ctx.right == FIG_BITEXT[0].right


def test_parity_rejects_right_references():
    # "x" is both a left word and, as a one-word sequence, a right entry
    # with the same rank, so its codeword also shows up in right slots
    bt = AlignedBitext([SentencePair(("x", "y"), ("x", "z"), {(2, 1), (1, 2)})])
    la = loaded(bt)
    rank, code = find_left_codeword("x", la)
    ranks = scan_sigma_b(code, la)
    for r in ranks:
        li, _ = la.sigma_b[r]
        assert la.sigma_l[li] == "x"
    assert [la.S.rank(e + 1) % 2 for e in kmp_search(la.sigma_b_bytes, code).tolist()] == [1, 0]


def test_codewords_of_right_references_only_find_nothing():
    bt = AlignedBitext([SentencePair(("a",), (w,), {(1, 1)}) for w in "pqrstuv"])
    la = loaded(bt)
    right_only = {ri for _, ri in la.sigma_b} - {li for li, _ in la.sigma_b}
    assert right_only
    for ri in right_only:
        assert kmp_search(la.sigma_b_bytes, etdc_code(ri)).size
        assert scan_sigma_b(etdc_code(ri), la) == []


def test_spot_needs_a_searchable_archive():
    with pytest.raises(CorruptArchiveError):
        LoadedArchive(api.compress(FIG_BITEXT, "2lcab").data)
    la = LoadedArchive(Archive.from_bytes(api.compress(FIG_BITEXT, "s2lcab").data))
    assert spot("casa", la)


def test_limit_and_empty_queries():
    bt = AlignedBitext([SentencePair(("a", "b", "a"), ("x", "y", "x"),
                                     {(1, 1), (2, 2), (3, 3)})] * 4)
    la = loaded(bt)
    assert len(spot("a", la)) == 8
    assert len(spot("a", la, limit=1)) == 1
    assert spot("a", la, limit=0) == []
    assert spot("", la) == []
    assert [o.sentence for o in spot("b", la)] == [0, 1, 2, 3]


# --- oracle equivalence on random corpora -----------------------------------

def _random_corpus(seed):
    rng = random.Random(seed)
    words = ["a", "b", "c", "la", "casa", "d"]
    pairs = []
    for _ in range(40):
        pairs.extend(random_bitext(rng, max_sentences=3, max_len=9, left_words=words).pairs)
    return AlignedBitext(pairs)


@pytest.mark.parametrize("scheme", ["1ton-complex", "1ton-simple"])
@pytest.mark.parametrize("seed", range(4))
def test_spot_equals_brute_force(scheme, seed):
    bt = _random_corpus(seed)
    r = api.compress(bt, "s2lcab", scheme)
    la = LoadedArchive(r.data)
    corpus = api.decompress_corpus(r.data)
    rng = random.Random(seed)
    vocab = ["a", "b", "c", "la", "casa", "d", "zz"]
    for _ in range(40):
        q = [rng.choice(vocab) for _ in range(rng.randint(1, 3))]
        assert spotted(spot(" ".join(q), la)) == brute_force_spot(corpus_pairs(corpus), q)


def test_pivot_choice_does_not_matter():
    bt = _random_corpus(9)
    la = loaded(bt)
    rng = random.Random(9)
    for _ in range(30):
        q = [rng.choice(["a", "b", "c", "la"]) for _ in range(rng.randint(1, 3))]
        base = spotted(spot(q, la))
        for k in range(len(q)):
            assert spotted(spot(q, la, pivot=k)) == base


def test_hits_are_exact_codeword_matches():
    bt = _random_corpus(5)
    la = loaded(bt)
    ranks = etdc_decode_all(la.stream).tolist()
    ends = (np.flatnonzero(la.stream_arr >= 0x80) + 1).tolist()
    by_end = dict(zip(ends, ranks))
    for occ in spot("a", la):
        r = by_end[occ.byte_position]
        li, _ = la.sigma_b[r]
        assert la.sigma_l[li] == "a"
        assert occ.biword_index == ends.index(occ.byte_position)


def test_left_token_identity_of_occurrence():
    la = loaded(_random_corpus(2))
    for occ in spot("la casa", la):
        s, e = occ.left_span
        assert occ.left[s:e] == ("la", "casa")
        assert EPS not in occ.left
