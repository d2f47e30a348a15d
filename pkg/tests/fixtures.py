"""Shared test fixtures: the Spanish-English sentence with word reordering."""

from gbw.bitext import AlignedBitext, SentencePair
from gbw.biwords import EPS, Biword

FIG_LEFT = tuple("prefiero volver a la casa verde en que vivimos".split())
FIG_RIGHT = tuple("i would like to go back to the green house we live in".split())
FIG_LINKS = frozenset({(1, 1), (1, 3), (2, 4), (2, 5), (2, 6), (3, 7), (4, 8), (5, 10),
                       (6, 9), (7, 13), (9, 11), (9, 12)})
FIG_PAIR = SentencePair(FIG_LEFT, FIG_RIGHT, FIG_LINKS)
FIG_BITEXT = AlignedBitext([FIG_PAIR])

FIG_BIWORDS = [
    Biword("prefiero", ("i", "like"), (0, 1)),
    Biword(EPS, ("would",), (0,)),
    Biword("volver", ("to", "go", "back"), (0, 0, 0)),
    Biword("a", ("to",), (0,)),
    Biword("la", ("the",), (0,)),
    Biword("casa", ("house",), (1,)),
    Biword("verde", ("green",), (0,)),
    Biword("en", ("in",), (2,)),
    Biword("que", (), ()),
    Biword("vivimos", ("we", "live"), (0, 0)),
]
