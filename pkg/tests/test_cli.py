import os

import pytest

from fixtures import FIG_LEFT, FIG_LINKS, FIG_RIGHT
from gbw.bitext import format_alignment
from gbw.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, main


def _heads(links):
    # one right word per left word, so the intersection is one-to-one
    return {(i, min(j for a, j in links if a == i)) for i, _ in links}


@pytest.fixture
def fig_files(tmp_path):
    paths = {}
    for name, text in (("left", " ".join(FIG_LEFT)), ("right", " ".join(FIG_RIGHT)),
                       ("align", format_alignment(FIG_LINKS)),
                       ("rev", format_alignment((j, i) for i, j in _heads(FIG_LINKS)))):
        p = tmp_path / f"{name}.txt"
        p.write_text(text + "\n", encoding="utf-8")
        paths[name] = str(p)
    paths["dir"] = tmp_path
    return paths


def inputs(f, reverse=False):
    args = ["--left", f["left"], "--right", f["right"], "--align", f["align"]]
    return args + (["--align-reverse", f["rev"]] if reverse else [])


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_compress_decompress_roundtrip(fig_files, capsys):
    out_path = str(fig_files["dir"] / "a.gbw")
    code, out, _ = run(["compress", *inputs(fig_files), "--method", "2lcab",
                        "--out", out_path], capsys)
    assert code == EXIT_OK
    assert "unpaired_fraction: 0.200000" in out
    assert "ratio:" in out
    left = str(fig_files["dir"] / "l.out")
    right = str(fig_files["dir"] / "r.out")
    code, _, _ = run(["decompress", out_path, "--left", left, "--right", right], capsys)
    assert code == EXIT_OK
    assert open(left, "rb").read() == open(fig_files["left"], "rb").read()
    assert open(right, "rb").read() == open(fig_files["right"], "rb").read()


def test_compress_is_deterministic(fig_files, capsys):
    a, b = str(fig_files["dir"] / "a.gbw"), str(fig_files["dir"] / "b.gbw")
    for p in (a, b):
        assert run(["compress", *inputs(fig_files), "--method", "s2lcab",
                    "--prune", "auto", "--out", p], capsys)[0] == EXIT_OK
    assert open(a, "rb").read() == open(b, "rb").read()


def test_one_to_one_needs_reverse_alignment(fig_files, capsys):
    out_path = str(fig_files["dir"] / "a.gbw")
    code, _, err = run(["compress", *inputs(fig_files), "--scheme", "1to1-mono",
                        "--out", out_path], capsys)
    assert code == EXIT_USAGE and "--align-reverse" in err
    assert not os.path.exists(out_path)
    code, _, _ = run(["compress", *inputs(fig_files, reverse=True), "--scheme", "1to1-mono",
                      "--out", out_path], capsys)
    assert code == EXIT_OK
    # a reverse file with fan-out is rejected at its line: a data error
    full = fig_files["dir"] / "full.txt"
    full.write_text(format_alignment((j, i) for i, j in FIG_LINKS) + "\n")
    code, _, err = run(["compress", *inputs(fig_files), "--align-reverse", str(full),
                        "--scheme", "1to1-nonmono", "--out", out_path], capsys)
    assert code == EXIT_DATA and "full.txt:1:" in err


def test_spot_output(fig_files, capsys):
    arc = str(fig_files["dir"] / "s.gbw")
    run(["compress", *inputs(fig_files), "--method", "s2lcab", "--out", arc], capsys)
    code, out, _ = run(["spot", arc, "la casa"], capsys)
    assert code == EXIT_OK
    assert "Left text: prefiero volver a *la* *casa* verde en que vivimos" in out
    assert "Right text: i would like to go back to *the* green *house* we live in" in out
    assert out.rstrip().endswith("1 results")
    code, out, _ = run(["spot", arc, "zzz"], capsys)
    assert code == EXIT_OK and out.strip() == "0 results"
    code, out, _ = run(["spot", arc, "casa", "--marker", "_"], capsys)
    assert "_casa_" in out and "_house_" in out


def test_spot_limit(tmp_path, capsys):
    (tmp_path / "l").write_text("a b\na c\na\n")
    (tmp_path / "r").write_text("x y\nx z\nx\n")
    (tmp_path / "al").write_text("0-0 1-1\n0-0 1-1\n0-0\n")
    arc = str(tmp_path / "s.gbw")
    run(["compress", "--left", str(tmp_path / "l"), "--right", str(tmp_path / "r"),
         "--align", str(tmp_path / "al"), "--method", "s2lcab", "--out", arc], capsys)
    _, out, _ = run(["spot", arc, "a"], capsys)
    assert out.count("Left text:") == 3
    _, out, _ = run(["spot", arc, "a", "--limit", "1"], capsys)
    assert out.count("Left text:") == 1 and "1 results" in out


def test_spot_rejects_other_methods(fig_files, capsys):
    arc = str(fig_files["dir"] / "t.gbw")
    run(["compress", *inputs(fig_files), "--method", "tre", "--out", arc], capsys)
    code, _, err = run(["spot", arc, "casa"], capsys)
    assert code == EXIT_USAGE and "s2lcab" in err


def test_truncated_archive_leaves_no_output(fig_files, capsys):
    arc = str(fig_files["dir"] / "a.gbw")
    run(["compress", *inputs(fig_files), "--out", arc], capsys)
    data = open(arc, "rb").read()
    bad = str(fig_files["dir"] / "bad.gbw")
    open(bad, "wb").write(data[:-7])
    before = set(os.listdir(fig_files["dir"]))
    code, _, err = run(["decompress", bad], capsys)
    assert code == EXIT_DATA and "error" in err
    assert set(os.listdir(fig_files["dir"])) == before


def test_stats_archive_and_raw(fig_files, capsys):
    arc = str(fig_files["dir"] / "a.gbw")
    run(["compress", *inputs(fig_files), "--out", arc], capsys)
    code, out1, _ = run(["stats", arc], capsys)
    assert code == EXIT_OK
    code, out2, _ = run(["stats", arc], capsys)
    assert out1 == out2
    lines = dict(x.split(": ", 1) for x in out1.splitlines())
    assert lines["unpaired_fraction"] == "0.200000"
    total = sum(float(lines[k]) for k in ("stream_fraction", "dictionary_fraction",
                                          "header_fraction"))
    assert abs(total - 1.0) < 1e-5
    code, out3, _ = run(["stats", *inputs(fig_files)], capsys)
    assert code == EXIT_OK and out3 == out1
    assert run(["stats"], capsys)[0] == EXIT_USAGE


def test_extract_dump(fig_files, capsys):
    code, out, _ = run(["extract", *inputs(fig_files), "--dump"], capsys)
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "prefiero ||| i like ||| 0 1"
    assert lines[1] == "<eps> ||| would ||| 0"
    assert lines[5] == "casa ||| house ||| 1"
    assert lines[-1] == "<eos> ||| <eos> ||| 0"
    assert len(lines) == 11
    dump = str(fig_files["dir"] / "dump.txt")
    run(["extract", *inputs(fig_files), "--dump", "--out", dump], capsys)
    assert open(dump).read().splitlines() == lines


def test_usage_and_data_errors(fig_files, tmp_path, capsys):
    assert run([], capsys)[0] == EXIT_USAGE
    assert run(["frobnicate"], capsys)[0] == EXIT_USAGE
    assert run(["compress", "--left", "x"], capsys)[0] == EXIT_USAGE
    assert run(["compress", *inputs(fig_files), "--prune", "maybe", "--out", "x"],
               capsys)[0] == EXIT_USAGE
    assert run(["extract", *inputs(fig_files), "--prune", "auto"], capsys)[0] == EXIT_USAGE
    bad = tmp_path / "bad.align"
    bad.write_text("0-99\n")
    code, _, err = run(["compress", "--left", fig_files["left"], "--right", fig_files["right"],
                        "--align", str(bad), "--out", str(tmp_path / "o")], capsys)
    assert code == EXIT_DATA and ":1:" in err
    assert run(["decompress", str(tmp_path / "missing")], capsys)[0] == EXIT_DATA


def test_many_to_one_resolution(tmp_path, capsys):
    (tmp_path / "l").write_text("a b\n")
    (tmp_path / "r").write_text("x\n")
    (tmp_path / "al").write_text("0-0 1-0\n")
    args = ["extract", "--left", str(tmp_path / "l"), "--right", str(tmp_path / "r"),
            "--align", str(tmp_path / "al"), "--dump"]
    assert run(args, capsys)[0] == EXIT_DATA
    code, out, _ = run(args + ["--resolve-many-to-one", "keep-first"], capsys)
    assert code == EXIT_OK and out.splitlines()[0] == "a ||| x ||| 0"
