"""Command-line interface.

Exit statuses: 0 on success, 1 for usage errors, 2 for bad data (input
files, alignments, archives).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile

from .archive import api
from .archive.container import Archive
from .archive.dictionaries import build_dictionaries
from .archive.stats import corpus_stats
from .bitext import load_bitext, normalized_lines, normalized_size
from .biwords import format_biword
from .errors import GbwError
from .schemes import ONE_TO_ONE, SCHEMES, Pruner, build_corpus
from .spotting import LoadedArchive, spot

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_inputs(p, required=True):
    p.add_argument("--left", required=required, help="left text, one sentence per line")
    p.add_argument("--right", required=required, help="right text, one sentence per line")
    p.add_argument("--align", required=required, help="left-to-right Pharaoh alignment")
    p.add_argument("--align-reverse", help="right-to-left alignment; links are intersected")
    p.add_argument("--resolve-many-to-one", choices=["keep-first"],
                   help="keep the smallest left index for a right word with several")
    p.add_argument("--scheme", choices=SCHEMES, default="1ton-complex")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gbw", description="Biword compression of word-aligned bitexts.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("compress", help="compress a word-aligned bitext")
    _add_inputs(p)
    p.add_argument("--method", choices=api.METHODS, default="2lcab")
    p.add_argument("--prune", default="off", help="off, auto or a threshold")
    p.add_argument("--out", required=True, help="archive path")

    p = sub.add_parser("decompress", help="restore the texts of an archive")
    p.add_argument("archive")
    p.add_argument("--left", help="output left text (default ARCHIVE.left.txt)")
    p.add_argument("--right", help="output right text (default ARCHIVE.right.txt)")

    p = sub.add_parser("spot", help="find a left phrase and its translations")
    p.add_argument("archive")
    p.add_argument("query")
    p.add_argument("--limit", type=int)
    p.add_argument("--marker", default="*", help="highlight marker (default '*')")

    p = sub.add_parser("stats", help="report on an archive or on raw inputs")
    p.add_argument("archive", nargs="?")
    _add_inputs(p, required=False)
    p.add_argument("--method", choices=api.METHODS, default="2lcab")
    p.add_argument("--prune", default="off")

    p = sub.add_parser("extract", help="extract biwords")
    _add_inputs(p)
    p.add_argument("--prune", default="off", help="off or a threshold")
    p.add_argument("--dump", action="store_true", help="print one biword per line")
    p.add_argument("--out", help="write the output here instead of stdout")
    return parser


def _check_prune(value, allow_auto=True):
    try:
        prune = api.parse_prune(value)
    except ValueError:
        raise UsageError(f"invalid --prune value {value!r}") from None
    if prune == "auto" and not allow_auto:
        raise UsageError("--prune auto needs a compression method")
    return prune


def _load(args):
    if args.scheme in ONE_TO_ONE and not args.align_reverse:
        raise UsageError(f"scheme {args.scheme} needs --align-reverse")
    return load_bitext(args.left, args.right, args.align, args.align_reverse,
                       resolve=args.resolve_many_to_one)


def _atomic_write(paths_data: list[tuple[str, bytes]]) -> None:
    """Write every file or none: data goes to temporaries first."""
    temps = []
    try:
        for path, data in paths_data:
            d = os.path.dirname(os.path.abspath(path))
            fd, tmp = tempfile.mkstemp(dir=d, prefix=".gbw-")
            temps.append(tmp)
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
        for (path, _), tmp in zip(paths_data, temps):
            os.replace(tmp, path)
    except BaseException:
        for tmp in temps:
            if os.path.exists(tmp):
                os.unlink(tmp)
        raise


def _report(lines, out=None):
    out = out or sys.stdout
    for line in lines:
        print(line, file=out)


def _stats_lines(result_or_archive, corpus, input_size=None):
    archive = result_or_archive
    lines = [f"method: {archive.method}", f"scheme: {archive.scheme or '-'}"]
    size = len(archive.to_bytes())
    if input_size:
        lines += [f"input_bytes: {input_size}", f"output_bytes: {size}",
                  f"ratio: {api.compression_ratio(input_size, size):.6f}"]
    if corpus is not None:
        lines += corpus_stats(corpus, archive).lines()
        d = build_dictionaries(corpus)
        lines += [f"sigma_l_entries: {len(d.sigma_l)}", f"sigma_r_entries: {len(d.sigma_r)}",
                  f"sigma_b_entries: {len(d.sigma_b)}"]
    else:
        lines += [f"archive_bytes: {size}"]
    for sid, n in sorted(archive.section_sizes().items()):
        lines.append(f"section_{sid}_bytes: {n}")
    return lines


def cmd_compress(args):
    prune = _check_prune(args.prune)
    bitext = _load(args)
    result = api.compress(bitext, args.method, args.scheme, prune)
    _atomic_write([(args.out, result.data)])
    lines = [f"archive: {args.out}"]
    if args.method != "wh":
        lines.append(f"delta: {result.delta}")
    _report(lines + _stats_lines(result.archive, result.corpus, result.input_size))
    return EXIT_OK


def cmd_decompress(args):
    with open(args.archive, "rb") as fh:
        data = fh.read()
    left, right = api.decompress(data)
    left_path = args.left or args.archive + ".left.txt"
    right_path = args.right or args.archive + ".right.txt"
    _atomic_write([(left_path, normalized_lines(left)), (right_path, normalized_lines(right))])
    _report([f"left: {left_path}", f"right: {right_path}", f"sentences: {len(left)}"])
    return EXIT_OK


def _highlight(tokens, marked, marker):
    return " ".join(f"{marker}{t}{marker}" if k in marked else t for k, t in enumerate(tokens))


def render_occurrence(occ, marker="*") -> list[str]:
    left_marked = set(range(*occ.left_span))
    return [f"Left text: {_highlight(occ.left, left_marked, marker)}",
            f"Right text: {_highlight(occ.right, set(occ.right_highlights), marker)}"]


def cmd_spot(args):
    if args.limit is not None and args.limit < 0:
        raise UsageError("--limit must be non-negative")
    with open(args.archive, "rb") as fh:
        archive = Archive.from_bytes(fh.read())
    if archive.method != "s2lcab":
        raise UsageError(f"spot needs an s2lcab archive; {args.archive} is {archive.method}")
    hits = spot(args.query, LoadedArchive(archive), limit=args.limit)
    for occ in hits:
        _report(render_occurrence(occ, args.marker) + [""])
    print(f"{len(hits)} results")
    return EXIT_OK


def cmd_stats(args):
    if args.archive:
        with open(args.archive, "rb") as fh:
            data = fh.read()
        archive = Archive.from_bytes(data)
        corpus = None if archive.method == "wh" else api.decompress_corpus(archive)
        input_size = normalized_size(api.decompress(archive))
        _report(_stats_lines(archive, corpus, input_size))
        return EXIT_OK
    if not (args.left and args.right and args.align):
        raise UsageError("stats needs an archive or --left, --right and --align")
    result = api.compress(_load(args), args.method, args.scheme, _check_prune(args.prune))
    _report(_stats_lines(result.archive, result.corpus, result.input_size))
    return EXIT_OK


def cmd_extract(args):
    prune = _check_prune(args.prune, allow_auto=False)
    corpus = build_corpus(_load(args), args.scheme)
    if prune:
        corpus = Pruner(corpus, scheme=args.scheme).prune(prune)
    if args.dump:
        lines = [format_biword(b) for b in corpus]
    else:
        lines = corpus_stats(corpus).lines()
    if args.out:
        _atomic_write([(args.out, "".join(x + "\n" for x in lines).encode("utf-8"))])
    else:
        _report(lines)
    return EXIT_OK


COMMANDS = {"compress": cmd_compress, "decompress": cmd_decompress, "spot": cmd_spot,
            "stats": cmd_stats, "extract": cmd_extract}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("gbw: a command is required (" + ", ".join(COMMANDS) + ")")
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GbwError, OSError, UnicodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
