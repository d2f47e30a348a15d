"""Compress one synthetic bitext with every method and scheme.

Prints the compression ratio of each combination plus a few corpus
statistics, so the effect of the extraction scheme and of the encoder
can be read off one table.

    python3 demos/compare_methods.py [target_bytes] [seed]
"""

import sys
import tempfile

from gbw.archive import api
from gbw.archive.stats import corpus_stats
from gbw.bitext import load_bitext
from gbw.schemes import SCHEMES
from gbw.synthetic import generate_bitext


def main(target=200_000, seed=0):
    with tempfile.TemporaryDirectory() as tmp:
        paths = generate_bitext(target, seed=seed).write(tmp)
        bitexts = {}
        for scheme in SCHEMES:
            rev = paths["align_reverse"] if scheme.startswith("1to1") else None
            bitexts[scheme] = load_bitext(paths["left"], paths["right"], paths["align"], rev)

    wh = api.compress(bitexts["1ton-complex"], "wh")
    print(f"input: {len(bitexts['1ton-complex'])} sentence pairs, {wh.input_size} bytes")
    print(f"wh (word Huffman per side, no alignment): ratio {wh.ratio:.4f}\n")
    print(f"{'scheme':14} {'unpaired':>9} {'tre':>8} {'2lcab':>8} {'s2lcab':>8}")
    for scheme, bt in bitexts.items():
        row = []
        for method in api.BIWORD_METHODS:
            r = api.compress(bt, method, scheme)
            assert api.decompress(r.data) == (bt.left_lines, bt.right_lines)
            row.append(r.ratio)
        stats = corpus_stats(r.corpus)
        print(f"{scheme:14} {stats.unpaired_fraction:9.3f} "
              + " ".join(f"{x:8.4f}" for x in row))


if __name__ == "__main__":
    args = [int(a) for a in sys.argv[1:]]
    main(*args)
