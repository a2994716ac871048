"""Word-to-pronunciation lexicon.

TSV storage, one pronunciation per line:

    surface<TAB>ascii-ipa[<TAB>dialect]

`#` starts a comment, blank lines are skipped, duplicate surfaces merge
into one entry with several pronunciations.  Lookup is case-insensitive.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

from .phonology import Dialect, IpaError, parse_ascii_ipa, render_ascii_ipa


class LexiconError(Exception):
    pass


class ParseError(LexiconError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class EmptyLexicon(LexiconError):
    pass


@dataclass(frozen=True)
class LexiconEntry:
    surface: str                                   # lowercase
    pronunciations: tuple[tuple[str, ...], ...]    # token tuples
    dialects: tuple[Dialect | None, ...]           # parallel tags

    def tagged(self) -> list[tuple[tuple[str, ...], Dialect | None]]:
        return list(zip(self.pronunciations, self.dialects))


@dataclass
class Lexicon:
    entries: dict[str, LexiconEntry] = field(default_factory=dict)
    source: str = ""
    default_dialect: Dialect | None = None

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, surface: str) -> bool:
        return surface.lower() in self.entries

    def words(self) -> list[str]:
        return sorted(self.entries)

    def lookup(self, surface: str) -> LexiconEntry | None:
        return self.entries.get(surface.lower())

    def pronunciations(self, surface: str,
                       dialect: Dialect | None = None) -> list[tuple[str, ...]]:
        """Pronunciations usable under `dialect` (untagged ones always)."""
        entry = self.lookup(surface)
        if entry is None:
            return []
        out = [p for p, tag in entry.tagged()
               if tag is None or tag is dialect]
        seen: set[tuple[str, ...]] = set()
        return [p for p in out if not (p in seen or seen.add(p))]

    def add(self, surface: str, tokens, dialect: Dialect | None = None) -> None:
        key = surface.lower()
        toks = tuple(tokens)
        old = self.entries.get(key)
        if old is None:
            self.entries[key] = LexiconEntry(key, (toks,), (dialect,))
        elif (toks, dialect) not in zip(old.pronunciations, old.dialects):
            self.entries[key] = replace(
                old, pronunciations=old.pronunciations + (toks,),
                dialects=old.dialects + (dialect,))


def loads(text: str, source: str = "<string>") -> Lexicon:
    lex = Lexicon(source=source)
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) not in (2, 3):
            raise ParseError(ln, f"expected 2 or 3 tab-separated fields, "
                                 f"got {len(fields)}")
        surface, ipa = fields[0].strip(), fields[1].strip()
        if not surface:
            raise ParseError(ln, "empty surface")
        dialect: Dialect | None = None
        if len(fields) == 3 and fields[2].strip():
            name = fields[2].strip().upper()
            try:
                dialect = Dialect[name]
            except KeyError:
                raise ParseError(ln, f"unknown dialect tag {fields[2]!r}")
        try:
            tokens = parse_ascii_ipa(ipa)
        except IpaError as exc:
            raise ParseError(ln, str(exc))
        if not tokens:
            raise ParseError(ln, "empty pronunciation")
        lex.add(surface, tokens, dialect)
    if not lex.entries:
        raise EmptyLexicon(f"no entries in {source}")
    return lex


def load_lexicon(path) -> Lexicon:
    p = Path(path)
    return loads(p.read_text(encoding="utf-8"), source=str(p))


def dumps(lex: Lexicon) -> str:
    lines = []
    for surface in lex.words():
        for tokens, tag in lex.entries[surface].tagged():
            ipa = render_ascii_ipa(tokens, brackets=True)
            lines.append(f"{surface}\t{ipa}" + (f"\t{tag.name}" if tag else ""))
    return "\n".join(lines) + "\n"


def save_lexicon(lex: Lexicon, path) -> None:
    Path(path).write_text(dumps(lex), encoding="utf-8")
