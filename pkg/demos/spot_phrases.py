"""Translation spotting on a searchable archive.

Builds an s2lcab archive of the reordered Spanish-English sentence and of
a larger synthetic bitext, then looks a few phrases up without
decompressing the archive as a whole.

    python3 demos/spot_phrases.py
"""

import time

from gbw.archive import api
from gbw.bitext import AlignedBitext, SentencePair, parse_alignment_line, tokenize_line
from gbw.spotting import LoadedArchive, spot
from gbw.synthetic import generate_bitext

LEFT = "prefiero volver a la casa verde en que vivimos".split()
RIGHT = "i would like to go back to the green house we live in".split()
LINKS = {(1, 1), (1, 3), (2, 4), (2, 5), (2, 6), (3, 7), (4, 8), (5, 10), (6, 9), (7, 13),
         (9, 11), (9, 12)}


def show(occ, marker="*"):
    s, e = occ.left_span
    left = [f"{marker}{w}{marker}" if s <= k < e else w for k, w in enumerate(occ.left)]
    hl = set(occ.right_highlights)
    right = [f"{marker}{w}{marker}" if k in hl else w for k, w in enumerate(occ.right)]
    print("  L:", " ".join(left))
    print("  R:", " ".join(right))


def main():
    la = LoadedArchive(api.compress(AlignedBitext([SentencePair(LEFT, RIGHT, LINKS)]),
                                    "s2lcab").data)
    for q in ("la casa", "prefiero", "vivimos"):
        print(f"query {q!r}")
        for occ in spot(q, la):
            show(occ)
    print()

    syn = generate_bitext(300_000, seed=11)
    pairs = []
    for l, r, a in zip(syn.left, syn.right, syn.forward):
        left, right = tokenize_line(l), tokenize_line(r)
        pairs.append(SentencePair(left, right, parse_alignment_line(a, len(left), len(right))))
    r = api.compress(AlignedBitext(pairs), "s2lcab")
    la = LoadedArchive(r.data)
    print(f"synthetic bitext: {r.input_size} bytes -> {len(r.data)} bytes ({r.ratio:.3f})")
    sample = pairs[7].left[2:4]
    for q in (sample[0], " ".join(sample)):
        t = time.perf_counter()
        hits = spot(q, la, limit=3)
        ms = (time.perf_counter() - t) * 1000
        print(f"query {q!r}: first {len(hits)} hits in {ms:.1f} ms")
        for occ in hits:
            show(occ)


if __name__ == "__main__":
    main()
