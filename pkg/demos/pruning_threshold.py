"""How the pruning threshold trades dictionary size against stream size.

Rare biword types are split into smaller pieces, which shrinks the
biword dictionary but lengthens the stream.  This prints the archive size
at a range of thresholds and then the one the automatic search picks.

    python3 demos/pruning_threshold.py [method] [scheme]
"""

import sys
import tempfile

from gbw.archive import api
from gbw.bitext import load_bitext
from gbw.schemes import Pruner, build_corpus, optimize_delta
from gbw.synthetic import generate_bitext


def main(method="2lcab", scheme="1ton-complex"):
    with tempfile.TemporaryDirectory() as tmp:
        paths = generate_bitext(100_000, seed=3).write(tmp)
        rev = paths["align_reverse"] if scheme.startswith("1to1") else None
        bt = load_bitext(paths["left"], paths["right"], paths["align"], rev)

    corpus = build_corpus(bt, scheme)
    pruner = Pruner(corpus, scheme=scheme)

    def size(cp):
        return len(api.encode_corpus(cp, method, scheme).to_bytes())

    print(f"{'delta':>6} {'biwords':>8} {'bytes':>8}")
    for delta in (0, 1, 2, 3, 5, 8, 13, 21, 50, 100, 500):
        cp = pruner.prune(delta)
        print(f"{delta:6d} {len(cp):8d} {size(cp):8d}")
    best = optimize_delta(corpus, size, scheme=scheme)
    print(f"\nchosen threshold: {best} ({size(pruner.prune(best))} bytes)")


if __name__ == "__main__":
    main(*sys.argv[1:])
