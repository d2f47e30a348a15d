import pytest

from gbw.bitext import (
    AlignedBitext,
    SentencePair,
    format_alignment,
    intersect_alignments,
    load_bitext,
    normalized_lines,
    normalized_size,
    parse_alignment_line,
    tokenize_line,
)
from gbw.errors import (
    AlignmentBoundsError,
    AlignmentError,
    InputFormatError,
    LineCountMismatch,
    OneToManyError,
)


def test_tokenize_lowercases_and_splits_punctuation():
    assert tokenize_line("La casa, verde.") == ("la", "casa", ",", "verde", ".")
    assert tokenize_line(b"  \xc3\x91o\xc3\xb1o  ") == ("ñoño",)
    assert tokenize_line("") == ()
    assert tokenize_line("l'avion") == ("l", "'", "avion")


def test_tokenize_rejects_bad_input():
    with pytest.raises(InputFormatError):
        tokenize_line(b"\xff\xfe")
    with pytest.raises(InputFormatError):
        tokenize_line("a\x00b")


def test_tokenize_is_idempotent():
    for s in ["Hello, World!", "¿Qué tal?", "x-y z"]:
        once = tokenize_line(s)
        assert tokenize_line(" ".join(once)) == once


def test_parse_alignment_zero_based_to_one_based():
    assert parse_alignment_line("0-0 1-2", 2, 3) == {(1, 1), (2, 3)}
    assert parse_alignment_line("", 2, 3) == frozenset()
    # duplicates collapse
    assert parse_alignment_line("0-0 0-0", 1, 1) == {(1, 1)}


@pytest.mark.parametrize("line", ["0-", "a-1", "0:1", "0-1-2", "-1-0"])
def test_parse_alignment_malformed(line):
    with pytest.raises(AlignmentError):
        parse_alignment_line(line, 3, 3)


def test_parse_alignment_bounds():
    with pytest.raises(AlignmentBoundsError):
        parse_alignment_line("2-0", 2, 3)
    with pytest.raises(AlignmentBoundsError):
        parse_alignment_line("0-3", 2, 3)


def test_one_to_many_violation_and_keep_first():
    with pytest.raises(OneToManyError):
        parse_alignment_line("0-1 1-1", 2, 2)
    assert parse_alignment_line("1-1 0-1 1-0", 2, 2, resolve="keep-first") == {(1, 2), (2, 1)}


def test_intersection():
    fwd = {(1, 1), (1, 2), (2, 3)}
    rev = {(1, 1), (3, 2)}  # (right, left)
    assert intersect_alignments(fwd, rev) == {(1, 1), (2, 3)}


def test_format_alignment_roundtrip():
    links = {(3, 1), (1, 2)}
    assert format_alignment(links) == "0-1 2-0"
    assert parse_alignment_line(format_alignment(links), 3, 2) == links


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_bytes(text.encode("utf-8"))
    return p


def test_load_bitext(tmp_path):
    l = _write(tmp_path, "l", "La casa.\nHola\n")
    r = _write(tmp_path, "r", "The house.\nHi\n")
    a = _write(tmp_path, "a", "0-0 1-1 2-2\n0-0\n")
    bt = load_bitext(l, r, a)
    assert len(bt) == 2
    assert bt[0].left == ("la", "casa", ".")
    assert bt[0].links == {(1, 1), (2, 2), (3, 3)}
    rev = _write(tmp_path, "rev", "0-0 2-2\n\n")
    bt2 = load_bitext(l, r, a, rev)
    assert bt2[0].links == {(1, 1), (3, 3)}
    assert bt2[1].links == frozenset()


def test_load_bitext_errors_carry_line_numbers(tmp_path):
    l = _write(tmp_path, "l", "a b\nc\n")
    r = _write(tmp_path, "r", "x y\nz\n")
    bad = _write(tmp_path, "a", "0-0\n0-5\n")
    with pytest.raises(AlignmentBoundsError) as exc:
        load_bitext(l, r, bad)
    assert exc.value.line == 2
    short = _write(tmp_path, "s", "0-0\n")
    with pytest.raises(LineCountMismatch):
        load_bitext(l, r, short)
    with pytest.raises(InputFormatError):
        load_bitext(tmp_path / "missing", r, short)


def test_normalized_size_counts_both_sides():
    bt = AlignedBitext([SentencePair(("a", "b"), ("c",), set())])
    assert normalized_lines(bt.left_lines) == b"a b\n"
    assert normalized_size(bt) == len(b"a b\n") + len(b"c\n")


def test_validate():
    SentencePair(("a",), ("x", "y"), {(1, 1), (1, 2)}).validate()
    with pytest.raises(OneToManyError):
        SentencePair(("a", "b"), ("x",), {(1, 1), (2, 1)}).validate()
    with pytest.raises(AlignmentBoundsError):
        SentencePair(("a",), ("x",), {(1, 2)}).validate()
