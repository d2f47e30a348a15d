"""Hypothesis strategies and plain random generators for sentence pairs."""

import random

from hypothesis import strategies as st

from gbw.bitext import AlignedBitext, SentencePair

LEFT_WORDS = ["a", "b", "c", "d", "e", "la", "casa"]
RIGHT_WORDS = ["v", "w", "x", "y", "z", "the", "house"]


@st.composite
def sentence_pairs(draw, max_len=7, one_to_one=False, density=None):
    M = draw(st.integers(0, max_len))
    N = draw(st.integers(0, max_len))
    left = draw(st.lists(st.sampled_from(LEFT_WORDS), min_size=M, max_size=M))
    right = draw(st.lists(st.sampled_from(RIGHT_WORDS), min_size=N, max_size=N))
    links = set()
    used = set()
    if M:
        for j in range(1, N + 1):
            if draw(st.booleans()) or (density is not None and draw(st.floats(0, 1)) < density):
                i = draw(st.integers(1, M))
                if one_to_one and i in used:
                    continue
                used.add(i)
                links.add((i, j))
    return SentencePair(left, right, links)


@st.composite
def bitexts(draw, max_sentences=4, **kw):
    pairs = draw(st.lists(sentence_pairs(**kw), min_size=1, max_size=max_sentences))
    return AlignedBitext(pairs)


def random_pair(rng: random.Random, max_len=8, one_to_one=False, p_link=0.7,
                left_words=LEFT_WORDS, right_words=RIGHT_WORDS) -> SentencePair:
    M = rng.randint(0, max_len)
    N = rng.randint(0, max_len)
    left = [rng.choice(left_words) for _ in range(M)]
    right = [rng.choice(right_words) for _ in range(N)]
    links = set()
    used = set()
    if M:
        for j in range(1, N + 1):
            if rng.random() < p_link:
                i = rng.randint(1, M)
                if one_to_one and i in used:
                    continue
                used.add(i)
                links.add((i, j))
    return SentencePair(left, right, links)


def random_bitext(rng: random.Random, max_sentences=4, **kw) -> AlignedBitext:
    return AlignedBitext([random_pair(rng, **kw) for _ in range(rng.randint(1, max_sentences))])
