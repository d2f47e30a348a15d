"""Seeded generator of word-aligned bitexts that look like real ones.

Both sides draw on Zipf-distributed vocabularies.  Every left word has a
preferred translation of zero to three right words and a few rarer
alternatives.  Sentences get local reordering (adjacent swaps and
displaced phrases), spurious right words, and sentence punctuation
written the way raw text is: attached to words and capitalised, so that
tokenisation has real work to do.  The forward alignment is one-to-many;
the reverse one links each right word to at most its own left word and
each left word to one head word, so their intersection is one-to-one.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .bitext import AlignedBitext, SentencePair, format_alignment

_ONSETS = ["b", "c", "d", "f", "g", "l", "m", "n", "p", "r", "s", "t", "v", "ch", "pr", "tr",
           "br", "gr", "pl", "qu", "ll", "ñ", "z", "x", "j", "h", "k", "w"]
_VOWELS = ["a", "e", "i", "o", "u", "é", "ia", "ue", "au", "ei", "ou", "ó"]
_CODAS = ["", "", "", "n", "s", "r", "l", "t", "m", "ç", "nd", "st"]


def _vocabulary(rng: np.random.Generator, size: int, prefix: str = "") -> list[str]:
    words = []
    seen = set()
    while len(words) < size:
        n = min(int(rng.geometric(0.55)), 4)
        w = prefix + "".join(rng.choice(_ONSETS) + rng.choice(_VOWELS) + rng.choice(_CODAS)
                             for _ in range(n))
        if w not in seen:
            seen.add(w)
            words.append(w)
    # frequent words are short, as in natural text
    words.sort(key=len)
    return words


def _zipf_sampler(rng, size, s=1.07):
    weights = 1.0 / np.arange(1, size + 1) ** s
    cdf = np.cumsum(weights / weights.sum())
    return lambda k: np.minimum(np.searchsorted(cdf, rng.random(k)), size - 1)


@dataclass
class SyntheticBitext:
    left: list[str]  # raw text lines
    right: list[str]
    forward: list[str]  # Pharaoh lines, left-to-right
    reverse: list[str]  # Pharaoh lines, right-to-left

    def write(self, directory) -> dict:
        """Write ``left.txt``, ``right.txt``, ``align.fwd`` and ``align.rev``."""
        os.makedirs(directory, exist_ok=True)
        paths = {}
        for name, lines in (("left", self.left), ("right", self.right),
                            ("align", self.forward), ("align_reverse", self.reverse)):
            fname = {"left": "left.txt", "right": "right.txt", "align": "align.fwd",
                     "align_reverse": "align.rev"}[name]
            path = os.path.join(directory, fname)
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write("".join(line + "\n" for line in lines))
            paths[name] = path
        return paths


def _render(tokens: list[str]) -> str:
    # attach punctuation to the preceding word and capitalise the first one
    out = ""
    for t in tokens:
        if t in ".,;:?!" and out:
            out += t
        else:
            out += (" " if out else "") + t
    return out[:1].upper() + out[1:]


def generate_bitext(target_bytes: int = 100_000, seed: int = 0, vocab_size: int = 20_000,
                    mean_length: float = 18.0) -> SyntheticBitext:
    """A bitext whose left side holds about ``target_bytes`` of text."""
    rng = np.random.default_rng(seed)
    left_vocab = _vocabulary(rng, vocab_size)
    right_vocab = _vocabulary(rng, int(vocab_size * 0.8), prefix="")
    draw_left = _zipf_sampler(rng, vocab_size)
    draw_right = _zipf_sampler(rng, len(right_vocab))

    # translation table: per left word a list of (right words, weight)
    kinds = rng.choice(4, size=vocab_size, p=[0.06, 0.72, 0.17, 0.05])
    n_alts = 1 + rng.binomial(3, 0.35, size=vocab_size)
    table = []
    for w in range(vocab_size):
        options = []
        for a in range(n_alts[w]):
            k = kinds[w] if a == 0 else int(rng.choice(4, p=[0.1, 0.7, 0.15, 0.05]))
            options.append(tuple(int(x) for x in draw_right(k)))
        weights = np.array([0.8] + [0.2 / (len(options) - 1)] * (len(options) - 1)) \
            if len(options) > 1 else np.array([1.0])
        table.append((options, weights))
    spurious = draw_right(4000)

    left_lines, right_lines, fwd_lines, rev_lines = [], [], [], []
    size = 0
    n_sp = 0
    while size < target_bytes:
        m = max(1, int(rng.gamma(3.0, mean_length / 3.0)))
        src = draw_left(m).tolist()
        # phrases: (left position, right word ids) in right order
        units = []
        for i, w in enumerate(src):
            options, weights = table[w]
            choice = options[int(rng.choice(len(options), p=weights))]
            units.append([i, list(choice)])
        # spurious right words attached to no left word
        for _ in range(int(rng.poisson(0.06 * m))):
            units.insert(int(rng.integers(0, len(units) + 1)),
                         [None, [int(spurious[n_sp % len(spurious)])]])
            n_sp += 1
        # local reordering: adjacent swaps and the odd displaced unit
        k = 0
        while k < len(units) - 1:
            if rng.random() < 0.12:
                units[k], units[k + 1] = units[k + 1], units[k]
                k += 2
            else:
                k += 1
        if len(units) > 4 and rng.random() < 0.08:
            a = int(rng.integers(0, len(units)))
            u = units.pop(a)
            units.insert(int(rng.integers(0, len(units) + 1)), u)

        right_tokens, links, heads = [], [], {}
        split_units = []
        for i, ws in units:
            # occasionally a multi-word translation is split around its neighbour
            if len(ws) >= 2 and rng.random() < 0.1:
                split_units.append((i, ws[1:]))
                ws = ws[:1]
            for n, wid in enumerate(ws):
                j = len(right_tokens)
                right_tokens.append(right_vocab[wid])
                if i is not None:
                    links.append((i, j))
                    if n == 0:
                        heads.setdefault(i, j)
            if split_units and rng.random() < 0.5:
                i2, ws2 = split_units.pop()
                for wid in ws2:
                    links.append((i2, len(right_tokens)))
                    right_tokens.append(right_vocab[wid])
        for i2, ws2 in split_units:
            for wid in ws2:
                links.append((i2, len(right_tokens)))
                right_tokens.append(right_vocab[wid])

        left_tokens = [left_vocab[w] for w in src]
        # punctuation: commas inside, a final mark aligned to its twin
        if m > 6 and rng.random() < 0.4:
            c = int(rng.integers(2, m - 1))
            jc = next((j for i, j in sorted(links, key=lambda t: t[1]) if i is not None and i >= c),
                      len(right_tokens))
            left_tokens.insert(c, ",")
            links = [(i + (i >= c), j + (j >= jc)) for i, j in links]
            heads = {i + (i >= c): j + (j >= jc) for i, j in heads.items()}
            right_tokens.insert(jc, ",")
            links.append((c, jc))
            heads[c] = jc
        end = "?" if rng.random() < 0.08 else "."
        links.append((len(left_tokens), len(right_tokens)))
        heads[len(left_tokens)] = len(right_tokens)
        left_tokens.append(end)
        right_tokens.append(end)

        left_lines.append(_render(left_tokens))
        right_lines.append(_render(right_tokens))
        fwd_lines.append(format_alignment((i + 1, j + 1) for i, j in links))
        rev_lines.append(format_alignment((j + 1, i + 1) for i, j in heads.items()))
        size += len(left_lines[-1]) + 1
    return SyntheticBitext(left_lines, right_lines, fwd_lines, rev_lines)


def bijective_bitext(n_sentences: int = 2000, seed: int = 0, vocab_size: int = 5000) -> AlignedBitext:
    """Right side = a token-wise relabelling of the left, identity alignment."""
    rng = np.random.default_rng(seed)
    left_vocab = _vocabulary(rng, vocab_size)
    relabel = {w: "r" + w[::-1] for w in left_vocab}
    draw = _zipf_sampler(rng, vocab_size)
    pairs = []
    for _ in range(n_sentences):
        m = max(1, int(rng.gamma(3.0, 6.0)))
        left = [left_vocab[w] for w in draw(m)]
        right = [relabel[w] for w in left]
        pairs.append(SentencePair(left, right, {(k, k) for k in range(1, m + 1)}))
    return AlignedBitext(pairs)
