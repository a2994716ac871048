"""Command-line front end: interpret, annotate, validate, stats.

Exit codes: 0 success, 1 parse/validation (or --strict) failures,
2 interpretation rule failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import coder, lexicon as lexicon_mod, markup
from .interpreter import NoRuleForUnit, interpret_document, interpret_word
from .markup import AnnKind, Document, MarkupError
from .phonology import Dialect, render_unicode_ipa


@dataclass(frozen=True)
class Stats:
    letters: int = 0
    words: int = 0
    annotations: int = 0
    annotated_words: int = 0

    @property
    def annotations_per_letter(self) -> float:
        return self.annotations / self.letters if self.letters else 0.0

    @property
    def annotations_per_word(self) -> float:
        return self.annotations / self.words if self.words else 0.0

    @property
    def annotated_words_per_word(self) -> float:
        return self.annotated_words / self.words if self.words else 0.0

    def as_dict(self) -> dict:
        return {
            "annotationsPerLetter": self.annotations_per_letter,
            "annotationsPerWord": self.annotations_per_word,
            "annotatedWordsPerWord": self.annotated_words_per_word,
            "counts": {
                "letters": self.letters,
                "words": self.words,
                "annotations": self.annotations,
                "annotatedWords": self.annotated_words,
            },
        }


def compute_stats(doc: Document) -> Stats:
    letters = words = annotations = annotated = 0
    for word in doc.words():
        words += 1
        letters += sum(1 for ch in word.letters if ch.isalpha())
        count = sum(1 for m in word.marks if m.kind is not AnnKind.GROUP)
        count += len(word.gaps)
        annotations += count
        annotated += bool(count)
    return Stats(letters, words, annotations, annotated)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _dialect(name: str | None) -> Dialect | None:
    return Dialect[name] if name else None


def cmd_interpret(args) -> int:
    try:
        doc = markup.parse_document(_read(args.file))
    except MarkupError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    try:
        results = interpret_document(doc, _dialect(args.dialect))
    except NoRuleForUnit as exc:
        print(f"rule failure: {exc}", file=sys.stderr)
        return 2
    for word, result in results:
        if result is None:
            print(f"{word.letters}\tPASS")
            continue
        ipa = (render_unicode_ipa(result.tokens) if args.unicode
               else result.text)
        print(f"{word.letters}\t{ipa}")
        if args.trace:
            traced = interpret_word(word, _dialect(args.dialect), trace=True)
            for line in traced.trace.lines():
                print(f"  {line}")
    return 0


def cmd_annotate(args) -> int:
    if not args.lexicon:
        print("annotate needs --lexicon FILE", file=sys.stderr)
        return 1
    try:
        lex = lexicon_mod.load_lexicon(args.lexicon)
    except lexicon_mod.LexiconError as exc:
        print(f"lexicon error: {exc}", file=sys.stderr)
        return 1
    doc, report = coder.code_document(_read(args.file), lex,
                                      dialect=_dialect(args.dialect))
    print(markup.render_document(doc))
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    if args.strict and any(r["status"] == "no_coding" for r in report):
        return 1
    return 0


def cmd_validate(args) -> int:
    try:
        doc = markup.parse_document(_read(args.file))
    except MarkupError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    violations = markup.validate(doc)
    for v in violations:
        print(f"{v.kind}\t{v.index}\t{v.message}")
    return 1 if violations else 0


def cmd_stats(args) -> int:
    try:
        doc = markup.parse_document(_read(args.file))
    except MarkupError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(compute_stats(doc).as_dict(), indent=2))
    return 0


_COMMANDS = {
    "interpret": cmd_interpret,
    "annotate": cmd_annotate,
    "validate": cmd_validate,
    "stats": cmd_stats,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="annoteng",
        description="Interpret and produce pronunciation-annotated English.")
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("file", nargs="?", default="-",
                        help="input file, or - for stdin")
    parser.add_argument("--dialect", choices=["GA", "RP"],
                        help="apply a dialect conversion (default: neutral)")
    parser.add_argument("--unicode", action="store_true",
                        help="render IPA with Unicode symbols")
    parser.add_argument("--trace", action="store_true",
                        help="dump the per-word pipeline steps")
    parser.add_argument("--lexicon", metavar="F",
                        help="pronunciation TSV for annotate")
    parser.add_argument("--report", metavar="F",
                        help="write the annotate JSON report to F")
    parser.add_argument("--strict", action="store_true",
                        help="fail when any word cannot be coded")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return _COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
