"""Markup model for pronunciation-annotated English text.

Annotations are TeX-style commands attached to letters:

    j\\pln{e}\\si{a}lou\\no{s}      one mark per letter (or letter pair)
    \\bbrd{\\st{\\i}e}ld            marks nest; doubled names span two letters
    Ire\\se{}land                  separators split a word into segments
    o\\ser{'}clock                 a separator may carry printed joiner text
    any\\w{}\\clr{o}ne             empty \\w{}/\\y{}/\\sch{} introduce a sound
    \\nonl{} ... \\nonr{}          region toggles fence off unannotated text

``parse_document`` turns text into a :class:`Document` of words, text runs
and region toggles; ``render_document`` is its byte-exact inverse on any
document it accepts.  ``normalize`` canonicalises equivalent spellings
(\\ssch{xy} -> x\\sch{}y, mark nesting order, dotless-i usage) without
changing meaning, and ``validate`` reports region violations as data.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field, replace
from enum import Enum


class AnnKind(Enum):
    SILENT = "si"
    STRESS_PRIMARY = "st"
    STRESS_SECONDARY = "stst"
    SEP_PLAIN = "se"
    SEP_LEFT = "sel"
    SEP_RIGHT = "ser"
    SEP_LEFT_RIGHT = "selr"
    SEP_RIGHT_LEFT = "serl"
    SCHWA_INSERT = "sch"
    PLAIN = "pln"
    NATURAL = "nat"
    BROAD = "brd"
    CLEAR = "clr"
    CENTRAL = "cnt"
    IOT = "iot"
    ROUND = "rnd"
    OPAQUE = "opq"
    I_DIPH = "idp"
    U_DIPH = "udp"
    SEMI_W = "w"
    SEMI_Y = "y"
    COMMON = "co"
    VOICED = "vo"
    VOICELESS = "no"
    SOFT_VOICED = "svo"
    SOFT_VOICELESS = "sno"
    HARD_VOICED = "hvo"
    HARD_VOICELESS = "hno"
    GROUP = "group"


# Vowel-class marks drawn above the letter; doubled names legal for six.
VOWEL_CLASSES = frozenset({
    AnnKind.PLAIN, AnnKind.NATURAL, AnnKind.BROAD, AnnKind.CLEAR,
    AnnKind.CENTRAL, AnnKind.IOT, AnnKind.ROUND, AnnKind.OPAQUE,
    AnnKind.I_DIPH, AnnKind.U_DIPH,
})
CONSONANT_MARKS = frozenset({
    AnnKind.COMMON, AnnKind.VOICED, AnnKind.VOICELESS, AnnKind.SOFT_VOICED,
    AnnKind.SOFT_VOICELESS, AnnKind.HARD_VOICED, AnnKind.HARD_VOICELESS,
    AnnKind.SEMI_W, AnnKind.SEMI_Y,
})
STRESS_MARKS = frozenset({AnnKind.STRESS_PRIMARY, AnnKind.STRESS_SECONDARY})
SEPARATORS = frozenset({
    AnnKind.SEP_PLAIN, AnnKind.SEP_LEFT, AnnKind.SEP_RIGHT,
    AnnKind.SEP_LEFT_RIGHT, AnnKind.SEP_RIGHT_LEFT,
})
INSERTIONS = frozenset({AnnKind.SEMI_W, AnnKind.SEMI_Y, AnnKind.SCHWA_INSERT})

_DOUBLED = {
    "nnat": AnnKind.NATURAL, "bbrd": AnnKind.BROAD, "cclr": AnnKind.CLEAR,
    "oopq": AnnKind.OPAQUE, "iidp": AnnKind.I_DIPH, "uudp": AnnKind.U_DIPH,
}
# Recognised but not legal wire forms.
_ILLEGAL_DOUBLED = frozenset({"ppln", "rrnd", "ccnt"})
_BY_NAME = {k.value: k for k in AnnKind}
_REGIONS = ("annl", "annr", "nonl", "nonr")


class MarkupError(ValueError):
    """Base error for wire-format problems."""

    def __init__(self, message: str, pos: int | None = None):
        super().__init__(message if pos is None else f"{message} (at {pos})")
        self.pos = pos


class UnknownCommand(MarkupError):
    pass


class IllegalDoubleForm(MarkupError):
    pass


class ArityError(MarkupError):
    pass


class UnbalancedBraces(MarkupError):
    pass


@dataclass(frozen=True)
class Mark:
    """One annotation command covering letters [start, start+span)."""

    kind: AnnKind
    start: int
    span: int
    doubled: bool = False   # wire used the doubled name (nnat, bbrd, ...)
    grouped: bool = False   # argument wrapped in \group{...}


@dataclass(frozen=True)
class Gap:
    """A zero-width item between letters index-1 and index.

    Separators carry their printed joiner text; insertions the introduced
    sound.  ``ssch`` flags the \\ssch{xy} spelling of a schwa insertion.
    """

    index: int
    kind: AnnKind
    joiner: str = ""
    ssch: bool = False


@dataclass(frozen=True)
class AnnotatedWord:
    letters: str                      # original letters incl. ' and -
    marks: tuple[Mark, ...] = ()      # document order, outer before inner
    gaps: tuple[Gap, ...] = ()        # document order
    forms: tuple[str, ...] = ()       # per letter: '', 'i' (\i), 'i{}' (\i{})

    def __post_init__(self):
        if len(self.forms) != len(self.letters):
            pad = self.forms + ("",) * (len(self.letters) - len(self.forms))
            object.__setattr__(self, "forms", pad[:len(self.letters)])

    def marks_at(self, pos: int) -> list[Mark]:
        return [m for m in self.marks if m.start <= pos < m.start + m.span]

    @property
    def annotated(self) -> bool:
        return bool(self.marks) or bool(self.gaps)


@dataclass(frozen=True)
class TextRun:
    text: str


@dataclass(frozen=True)
class RegionToggle:
    kind: str  # one of annl / annr / nonl / nonr


@dataclass(frozen=True)
class Document:
    items: tuple = ()

    def __iter__(self):
        return iter(self.items)

    def words(self) -> list[AnnotatedWord]:
        return [it for it in self.items if isinstance(it, AnnotatedWord)]


@dataclass(frozen=True)
class Violation:
    kind: str
    index: int       # item index in the document
    detail: str


# ---------------------------------------------------------------------------
# parsing

_ASCII_LETTERS = frozenset(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ")


def _command_name(text: str, i: int) -> tuple[str, int]:
    # i points at the backslash; returns (name, index past name)
    j = i + 1
    while j < len(text) and text[j].isalpha():
        j += 1
    if j == i + 1:
        raise UnknownCommand(f"stray backslash {text[i:i + 2]!r}", i)
    return text[i + 1:j], j


def _brace_arg(text: str, i: int) -> tuple[str, int]:
    # i points at '{'; returns (raw content, index past '}')
    if i >= len(text) or text[i] != "{":
        raise ArityError("missing braced argument", i)
    depth, j = 1, i + 1
    while j < len(text):
        if text[j] == "{":
            depth += 1
        elif text[j] == "}":
            depth -= 1
            if depth == 0:
                return text[i + 1:j], j + 1
        j += 1
    raise UnbalancedBraces("unclosed brace", i)


def _check_ascii(ch: str, pos: int) -> None:
    if ch in _ASCII_LETTERS:
        return
    try:
        name = unicodedata.name(ch).lower()
    except ValueError:
        name = repr(ch)
    raise UnknownCommand(f"unsupported letter {ch!r} ({name})", pos)


class _ArgParser:
    """Parses a mark argument: letters, \\i forms, nested marks, \\group."""

    def __init__(self, raw: str, pos: int):
        self.raw = raw
        self.pos = pos           # document offset, for error messages
        self.letters: list[str] = []
        self.forms: list[str] = []
        self.marks: list[Mark] = []   # positions relative to arg start
        self.grouped = False

    def run(self) -> "_ArgParser":
        raw = self.raw
        if raw.startswith("\\group"):
            name, j = _command_name(raw, 0)
            inner, j = _brace_arg(raw, j)
            if raw[j:]:
                raise ArityError("content after \\group", self.pos)
            self.grouped = True
            raw = inner
        i = 0
        while i < len(raw):
            ch = raw[i]
            if ch == "\\":
                name, j = _command_name(raw, i)
                if name == "i":
                    if raw[j:j + 2] == "{}":
                        self._letter("i", "i{}")
                        i = j + 2
                    else:
                        self._letter("i", "i")
                        i = j
                    continue
                kind, doubled = _lookup(name, self.pos + i)
                arg, j = _brace_arg(raw, j)
                sub = _ArgParser(arg, self.pos + i).run()
                if not sub.letters:
                    raise ArityError(f"\\{name} needs letters here", self.pos + i)
                base = len(self.letters)
                self.marks.append(Mark(kind, base, len(sub.letters), doubled,
                                       sub.grouped))
                for m in sub.marks:
                    self.marks.append(replace(m, start=m.start + base))
                self.letters.extend(sub.letters)
                self.forms.extend(sub.forms)
                i = j
            elif ch.isalpha():
                _check_ascii(ch, self.pos + i)
                self._letter(ch, "")
                i += 1
            else:
                raise ArityError(f"unexpected {ch!r} in argument", self.pos + i)
        return self

    def _letter(self, ch: str, form: str) -> None:
        self.letters.append(ch)
        self.forms.append(form)


def _lookup(name: str, pos: int) -> tuple[AnnKind, bool]:
    if name in _DOUBLED:
        return _DOUBLED[name], True
    if name in _ILLEGAL_DOUBLED:
        raise IllegalDoubleForm(f"\\{name} has no legal doubled form", pos)
    kind = _BY_NAME.get(name)
    if kind is None or kind is AnnKind.GROUP:
        raise UnknownCommand(f"\\{name}", pos)
    return kind, False


def _validate_mark(kind: AnnKind, doubled: bool, span: int, pos: int) -> None:
    if kind in SEPARATORS or kind is AnnKind.SCHWA_INSERT:
        return
    if span == 0:
        raise ArityError(f"\\{kind.value} needs letters", pos)
    if kind in VOWEL_CLASSES or kind in STRESS_MARKS or kind is AnnKind.SILENT:
        if kind in STRESS_MARKS and span != 1:
            raise ArityError(f"\\{kind.value} covers one letter", pos)
        if kind in VOWEL_CLASSES:
            if doubled and span != 2:
                raise ArityError(f"doubled \\{kind.value} covers two letters", pos)
            if not doubled and span != 1:
                raise ArityError(f"\\{kind.value} covers one letter", pos)
        if kind is AnnKind.SILENT and span > 3:
            raise ArityError("\\si covers at most three letters", pos)
        return
    if span > 3:
        raise ArityError(f"\\{kind.value} covers at most three letters", pos)


class _WordParser:
    def __init__(self, text: str, i: int):
        self.text = text
        self.i = i
        self.letters: list[str] = []
        self.forms: list[str] = []
        self.marks: list[Mark] = []
        self.gaps: list[Gap] = []

    def run(self) -> tuple[AnnotatedWord, int]:
        text = self.text
        while self.i < len(self.text):
            ch = text[self.i]
            if ch == "\\":
                if not self._command():
                    break
            elif ch.isalpha():
                _check_ascii(ch, self.i)
                self._letter(ch, "")
                self.i += 1
            elif ch == "'":
                if self.letters and self._starts_letterish(self.i + 1):
                    self._letter("'", "")
                    self.i += 1
                else:
                    break
            elif ch == "-":
                if self.letters and self._starts_letterish(self.i + 1):
                    self._letter("-", "")
                    self.i += 1
                else:
                    break
            else:
                break
        if not self.letters:
            raise ArityError("empty word", self.i)
        word = AnnotatedWord("".join(self.letters), tuple(self.marks),
                             tuple(self.gaps), tuple(self.forms))
        return word, self.i

    def _starts_letterish(self, j: int) -> bool:
        text = self.text
        if j < len(text) and text[j].isalpha():
            return True
        if j < len(text) and text[j] == "\\":
            try:
                name, _ = _command_name(text, j)
            except MarkupError:
                return False
            return name == "i" or name in _BY_NAME or name in _DOUBLED
        return False

    def _letter(self, ch: str, form: str) -> None:
        self.letters.append(ch)
        self.forms.append(form)

    def _command(self) -> bool:
        text = self.text
        name, j = _command_name(text, self.i)
        if name in _REGIONS:
            return False
        if name == "i":
            if text[j:j + 2] == "{}":
                self._letter("i", "i{}")
                self.i = j + 2
            else:
                self._letter("i", "i")
                self.i = j
            return True
        if name == "ssch":
            arg, j = _brace_arg(text, j)
            if len(arg) != 2 or not all(c in _ASCII_LETTERS for c in arg):
                raise ArityError("\\ssch spans exactly two plain letters", self.i)
            self._letter(arg[0], "")
            self.gaps.append(Gap(len(self.letters), AnnKind.SCHWA_INSERT,
                                 ssch=True))
            self._letter(arg[1], "")
            self.i = j
            return True
        kind, doubled = _lookup(name, self.i)
        arg, j = _brace_arg(text, j)
        if kind in SEPARATORS:
            if "\\" in arg or "{" in arg:
                raise ArityError(f"\\{name} takes literal joiner text", self.i)
            self.gaps.append(Gap(len(self.letters), kind, joiner=arg))
            self.i = j
            return True
        sub = _ArgParser(arg, self.i).run()
        if not sub.letters:
            if kind in INSERTIONS:
                self.gaps.append(Gap(len(self.letters), kind))
                self.i = j
                return True
            raise ArityError(f"\\{name} needs letters", self.i)
        _validate_mark(kind, doubled, len(sub.letters), self.i)
        base = len(self.letters)
        self.marks.append(Mark(kind, base, len(sub.letters), doubled,
                               sub.grouped))
        for m in sub.marks:
            self.marks.append(replace(m, start=m.start + base))
        self.letters.extend(sub.letters)
        self.forms.extend(sub.forms)
        self.i = j
        return True


def parse_document(text: str) -> Document:
    items: list = []
    buf: list[str] = []
    i = 0

    def flush() -> None:
        if buf:
            items.append(TextRun("".join(buf)))
            buf.clear()

    while i < len(text):
        ch = text[i]
        if ch == "\\":
            name, j = _command_name(text, i)
            if name in _REGIONS:
                arg, j = _brace_arg(text, j) if text[j:j + 1] == "{" else ("", j)
                if arg:
                    raise ArityError(f"\\{name} takes no argument", i)
                flush()
                items.append(RegionToggle(name))
                i = j
            else:
                flush()
                word, i = _WordParser(text, i).run()
                items.append(word)
        elif ch.isalpha():
            if ch not in _ASCII_LETTERS:
                _check_ascii(ch, i)
            flush()
            word, i = _WordParser(text, i).run()
            items.append(word)
        else:
            buf.append(ch)
            i += 1
    flush()
    return Document(tuple(items))


def parse_word(text: str) -> AnnotatedWord:
    """Parses text that must contain exactly one word."""
    doc = parse_document(text)
    words = doc.words()
    if len(words) != 1 or len(doc.items) != 1:
        raise MarkupError(f"expected a single word, got {text!r}")
    return words[0]


# ---------------------------------------------------------------------------
# rendering

def _mark_name(m: Mark) -> str:
    if m.doubled:
        for name, kind in _DOUBLED.items():
            if kind is m.kind:
                return name
    return m.kind.value


def _render_letter(word: AnnotatedWord, pos: int) -> str:
    form = word.forms[pos]
    if form == "i":
        return "\\i"
    if form == "i{}":
        return "\\i{}"
    return word.letters[pos]


def _render_span(word: AnnotatedWord, lo: int, hi: int,
                 marks: list[Mark]) -> str:
    out: list[str] = []
    pos = lo
    while pos < hi:
        covering = [m for m in marks if m.start == pos]
        if covering:
            outer = covering[0]
            inner = [m for m in marks if m is not outer
                     and outer.start <= m.start < outer.start + outer.span]
            body = _render_span(word, pos, pos + outer.span, inner)
            if outer.grouped:
                body = "\\group{" + body + "}"
            out.append("\\" + _mark_name(outer) + "{" + body + "}")
            pos += outer.span
        else:
            out.append(_render_letter(word, pos))
            pos += 1
    return "".join(out)


def render_word(word: AnnotatedWord) -> str:
    gaps_at: dict[int, list[Gap]] = {}
    for g in word.gaps:
        gaps_at.setdefault(g.index, []).append(g)
    marks = list(word.marks)
    # an \ssch gap emits both flanking letters itself
    ssch_skip = {g.index - 1 for g in word.gaps if g.ssch}
    ssch_skip |= {g.index for g in word.gaps if g.ssch}
    n = len(word.letters)
    out: list[str] = []
    pos = 0
    while pos <= n:
        for g in gaps_at.get(pos, ()):
            if g.ssch:
                out.append("\\ssch{%s%s}" % (word.letters[pos - 1],
                                             word.letters[pos]))
            elif g.kind in SEPARATORS:
                out.append("\\%s{%s}" % (g.kind.value, g.joiner))
            else:
                out.append("\\%s{}" % g.kind.value)
        if pos == n:
            break
        if pos in ssch_skip:
            pos += 1
            continue
        covering = [m for m in marks if m.start == pos]
        if covering:
            outer = covering[0]
            inner = [m for m in marks if m is not outer
                     and outer.start <= m.start < outer.start + outer.span]
            body = _render_span(word, pos, pos + outer.span, inner)
            if outer.grouped:
                body = "\\group{" + body + "}"
            out.append("\\" + _mark_name(outer) + "{" + body + "}")
            pos += outer.span
        else:
            out.append(_render_letter(word, pos))
            pos += 1
    return "".join(out)


def render_document(doc: Document) -> str:
    out: list[str] = []
    for item in doc.items:
        if isinstance(item, TextRun):
            out.append(item.text)
        elif isinstance(item, RegionToggle):
            out.append("\\%s{}" % item.kind)
        else:
            out.append(render_word(item))
    return "".join(out)


# ---------------------------------------------------------------------------
# normalisation

_ABOVE_ACCENTS = VOWEL_CLASSES  # drawn above the letter; dotless i below them


def _letter_follows(word: AnnotatedWord, pos: int,
                    forms: list[str]) -> bool:
    # True when the rendered character right after pos is a plain letter,
    # so a bare \i there would swallow it.
    nxt = pos + 1
    if nxt >= len(word.letters):
        return False
    if forms[nxt] != "" or not word.letters[nxt].isalpha():
        return False
    if any(g.index == nxt for g in word.gaps):
        return False
    if any(m.start == nxt or m.start + m.span == nxt for m in word.marks):
        return False
    return True


def _canonical_forms(word: AnnotatedWord) -> tuple[str, ...]:
    forms = ["" if ch == "i" else f for ch, f in zip(word.letters, word.forms)]
    for pos, ch in enumerate(word.letters):
        if ch != "i":
            continue
        if any(m.kind in _ABOVE_ACCENTS for m in word.marks_at(pos)):
            forms[pos] = "i{}" if _letter_follows(word, pos, forms) else "i"
    return tuple(forms)


def _canonical_marks(word: AnnotatedWord) -> tuple[Mark, ...]:
    # Stress outermost on single letters; class outermost over two letters.
    def sort_key(m: Mark) -> tuple:
        outer_rank = 0 if m.kind in STRESS_MARKS else 1
        return (m.start, -m.span, outer_rank if m.span == 1 else 0)

    return tuple(sorted(word.marks, key=sort_key))


def normalize_word(word: AnnotatedWord) -> AnnotatedWord:
    gaps = tuple(replace(g, ssch=False) for g in word.gaps)
    w = replace(word, gaps=gaps, marks=_canonical_marks(word))
    return replace(w, forms=_canonical_forms(w))


def normalize(doc: Document) -> Document:
    items = tuple(normalize_word(it) if isinstance(it, AnnotatedWord) else it
                  for it in doc.items)
    return Document(items)


# ---------------------------------------------------------------------------
# validation

def validate(doc: Document) -> list[Violation]:
    """Checks region structure and purity; violations are data, not errors."""
    out: list[Violation] = []
    open_non = open_ann = False
    for idx, item in enumerate(doc.items):
        if isinstance(item, RegionToggle):
            if item.kind == "nonl":
                if open_non:
                    out.append(Violation("nested-region", idx,
                                         "\\nonl inside an open \\nonl"))
                open_non = True
            elif item.kind == "nonr":
                if not open_non:
                    out.append(Violation("unopened-region", idx,
                                         "\\nonr without \\nonl"))
                open_non = False
            elif item.kind == "annl":
                if open_ann:
                    out.append(Violation("nested-region", idx,
                                         "\\annl inside an open \\annl"))
                open_ann = True
            else:
                if not open_ann:
                    out.append(Violation("unopened-region", idx,
                                         "\\annr without \\annl"))
                open_ann = False
        elif isinstance(item, AnnotatedWord) and open_non and item.annotated:
            out.append(Violation("annotation-in-plain-region", idx,
                                 f"annotated word {item.letters!r} inside "
                                 "\\nonl...\\nonr"))
    if open_non:
        out.append(Violation("unclosed-region", len(doc.items),
                             "\\nonl never closed"))
    if open_ann:
        out.append(Violation("unclosed-region", len(doc.items),
                             "\\annl never closed"))
    return out
