"""Rule pipeline turning annotated English words into ASCII IPA.

A word goes through twelve passes: silent letters drop, the word splits
into segments, spelling digraphs resolve, w/y classify as vowel or
consonant, vowel units and consonant groups form, stress lands on units,
stressed vowels categorise as natural or plain (and rhotic or not),
vowels and consonants take their sound values, the word recomposes, and
a final postprocess smooths the token string for the chosen accent.

``interpret_word`` runs one word; ``interpret_document`` runs a parsed
document and resolves the cross-word effects (unstressed "the", linking
r) from the following word's first sound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .markup import (
    AnnKind, AnnotatedWord, Document, RegionToggle,
    CONSONANT_MARKS, SEPARATORS, VOWEL_CLASSES,
    parse_document, parse_word, render_word,
)
from .phonology import (
    CONSONANT_SET, Dialect, JOINT, STRESS_PRIMARY, STRESS_SECONDARY,
    STRESS_SET, VOICELESS, VOWEL_SET, render_ascii_ipa,
)


class NoRuleForUnit(Exception):
    """No interpretation rule covers a unit of the word."""

    def __init__(self, word: str, unit: str, reason: str):
        super().__init__(f"{word!r}: no rule for {unit!r} ({reason})")
        self.word = word
        self.unit = unit
        self.reason = reason


# ---------------------------------------------------------------------------
# working state

class _Kind(Enum):
    LETTER = "letter"
    GHOST = "ghost"      # spot left by a silent gh; transparent to vowels
    BARRIER = "barrier"  # spot left by a deleted h; blocks unit formation
    INSERT = "insert"    # \w{} \y{} \sch{} introduced sound


@dataclass(eq=False)
class _Slot:
    kind: _Kind
    ch: str = ""                      # lowercase letter for LETTER slots
    vclass: AnnKind | None = None     # vowel-class mark
    vid: int = -1                     # shared id for a span-2 class mark
    vdoubled: bool = False
    cmark: AnnKind | None = None      # consonant mark
    cid: int = -1                     # shared id for a multi-letter mark
    synth: bool = False               # consonant mark added by a rule
    stress: str = ""                  # annotated stress: '"' or '""'
    insert: AnnKind | None = None     # SEMI_W / SEMI_Y / SCHWA_INSERT
    cls: str = ""                     # classification: "V" or "C"

    @property
    def letter(self) -> bool:
        return self.kind is _Kind.LETTER

    @property
    def unannotated(self) -> bool:
        return (self.letter and self.vclass is None and self.cmark is None
                and self.stress == "")


@dataclass(eq=False)
class _Unit:
    vowel: bool
    slots: list[_Slot]
    stress: str = ""        # '"', '""' or ''
    inferred: bool = False  # stress inferred, not annotated or default
    rhotic: bool = False
    natural: bool = False   # position for unannotated stressed singles
    ghost_after: bool = False
    tokens: list[str] = field(default_factory=list)

    @property
    def letters(self) -> str:
        return "".join(s.ch for s in self.slots if s.letter)

    @property
    def letter_backed(self) -> bool:
        return any(s.letter for s in self.slots)

    @property
    def silent(self) -> bool:
        return not self.tokens


@dataclass(eq=False)
class _Seg:
    slots: list[_Slot]
    lead: object = None     # None, "'", "-", or a separator AnnKind
    units: list[_Unit] = field(default_factory=list)
    tokens: list[str] = field(default_factory=list)

    @property
    def joint(self) -> str:
        return JOINT if self.lead in ("'", "-") else ""

    @property
    def breaks_domain(self) -> bool:
        return self.lead is None or self.lead in ("'", "-") or self.lead in (
            AnnKind.SEP_LEFT, AnnKind.SEP_RIGHT,
            AnnKind.SEP_LEFT_RIGHT, AnnKind.SEP_RIGHT_LEFT)


class PipelineTrace:
    """Numbered snapshots of the pipeline, one line per step."""

    def __init__(self, source: str):
        self.source = source
        self.entries: list[tuple[str, str]] = []

    def add(self, op: str, state: str) -> None:
        self.entries.append((op, state))

    def lines(self) -> list[str]:
        out = [f" 0 input           {self.source}"]
        for n, (op, state) in enumerate(self.entries, 1):
            out.append(f"{n:2d} {op:<15s} {state}")
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


@dataclass(frozen=True)
class IpaTranscription:
    """ASCII-IPA result for one word."""

    tokens: tuple[str, ...]
    syllables: int
    trace: PipelineTrace | None = None

    @property
    def text(self) -> str:
        return render_ascii_ipa(self.tokens)

    def bracketed(self) -> str:
        return "[" + self.text + "]"

    def __str__(self) -> str:
        return self.text


# ---------------------------------------------------------------------------
# sound tables

_VOWEL_LETTERS = frozenset("aeiou")
_COLUMN = {"a": "a", "e": "e", "i": "i", "y": "i", "o": "o", "u": "u",
           "w": "u"}

# class -> column -> (value, rhotic value); None rhotic falls back to value,
# a missing column has no rule.
_K = AnnKind
_CLASS_TABLE: dict[AnnKind, dict[str, tuple[tuple[str, ...],
                                            tuple[str, ...] | None]]] = {
    _K.NATURAL: {
        "a": (("eI",), ("E", "K")),
        "e": (("i:",), ("I", "K")),
        "i": (("aI",), ("aI", "K")),
        "o": (("oU",), ("O",)),
        "u": (("(j)", "u:"), ("(j)", "U", "K")),
    },
    _K.PLAIN: {
        "a": (("\\ae",), ("A",)),
        "e": (("E",), ("3:",)),
        "i": (("I",), ("3:",)),
        "o": (("6",), ("O",)),
        "u": (("2",), ("3:",)),
    },
    _K.BROAD: {
        "a": (("A:",), ("A",)),
        "e": (("eI",), ("3", "K")),
        "i": (("i:",), ("I", "K")),
        "o": (("O:",), ("O",)),
        "u": (("u:",), ("U", "K")),
    },
    _K.CLEAR: {
        "a": (("2",), None),
        "e": (("\\ae",), ("A",)),
        "i": (("\\ae",), None),
        "o": (("2",), None),
    },
    _K.CENTRAL: {
        "a": (("E",), None),
        "e": (("@",), None),
        "i": (("@",), None),
        "o": (("3",), ("3:",)),
        "u": (("E",), None),
    },
    _K.IOT: {
        "a": (("I",), None),
        "e": (("I",), None),
        "i": (("I",), None),
        "o": (("I",), None),
        "u": (("I",), None),
    },
    _K.ROUND: {
        "a": (("O:",), ("O",)),
        "e": (("oU",), None),
        "o": (("u:",), None),
        "u": (("oU",), ("O",)),
    },
    _K.OPAQUE: {
        "a": (("O",), None),
        "e": (("O",), None),
        "i": (("O",), None),
        "o": (("U",), ("U", "K")),
        "u": (("U",), None),
    },
    _K.I_DIPH: {
        "a": (("aI",), ("aI", "K")),
        "e": (("aI",), ("aI", "K")),
        "o": (("w", "A:"), None),
        "u": (("j", "@"), None),
    },
    _K.U_DIPH: {
        "a": (("aU",), ("aU", "K")),
        "e": (("OI",), ("OI", "K")),
        "o": (("aU",), ("aU", "K")),
        "u": (("j", "U"), None),
    },
}

# two-letter units: pair -> (stressed, stressed rhotic,
#                            unstressed, unstressed rhotic)
_S = None  # "same as stressed"
_PAIR_TABLE: dict[str, tuple] = {
    "aa": (("A:",), ("A",), _S, _S),
    "ae": (("i:",), ("I", "K"), _S, _S),
    "ee": (("i:",), ("I", "K"), _S, _S),
    "ea": (("i:",), ("I", "K"), ("I", "@"), ("I", "@")),
    "ai": (("eI",), ("E", "K"), _S, _S),
    "ay": (("eI",), ("E", "K"), _S, _S),
    "ei": (("eI",), ("E", "K"), ("I",), ("E", "K")),
    "ey": (("eI",), ("E", "K"), ("I",), ("E", "K")),
    "au": (("O:",), ("O",), _S, _S),
    "aw": (("O:",), ("O",), _S, _S),
    "eu": (("(j)", "u:"), ("(j)", "U", "K"), _S, _S),
    "ew": (("(j)", "u:"), ("(j)", "U", "K"), _S, _S),
    "oa": (("oU",), ("O",), _S, _S),
    "ow": (("oU",), ("O",), _S, _S),
    "ou": (("aU",), ("aU", "K"), ("@",), ("@",)),
    "oi": (("OI",), ("OI", "K"), _S, _S),
    "oy": (("OI",), ("OI", "K"), _S, _S),
    "oo": (("u:",), ("U", "K"), _S, _S),
}
_DIGRAPH_PAIRS = frozenset(_PAIR_TABLE)

# marked consonant units: (mark, letters) -> tokens
def _rows(kind: AnnKind, table: dict[str, str | tuple[str, ...]]):
    for letters, sound in table.items():
        toks = (sound,) if isinstance(sound, str) else sound
        yield (kind, letters), toks


_MARKED_CONS: dict[tuple[AnnKind, str], tuple[str, ...]] = dict(
    row for kind, table in [
        (_K.COMMON, {
            "c": "k", "g": "g", "gh": "f", "h": "x", "ch": "x", "j": "h",
            "l": "r", "n": "N", "r": "r", "t": "R", "th": ("t", "T"),
            "w": "*w", "wh": "*w", "x": "z", "z": ("t", "s"),
        }),
        (_K.VOICED, {
            "f": "v", "ph": "v", "s": "z", "ss": "z", "th": "D", "w": "v",
            "x": ("g", "z"),
        }),
        (_K.VOICELESS, {
            "c": "s", "d": "t", "g": "k", "gh": "p", "h": "h", "l": "r",
            "s": "s", "th": "T", "u": "f", "v": "f", "x": ("k", "s"),
            "z": "s",
        }),
        (_K.SOFT_VOICED, {
            "g": "Z", "j": "Z", "s": "Z", "si": "Z", "se": "Z", "sy": "Z",
            "t": "Z", "ti": "Z", "te": "Z", "ty": "Z", "z": "Z", "zi": "Z",
            "ze": "Z", "zy": "Z", "zh": "Z",
        }),
        (_K.SOFT_VOICELESS, {
            "c": "S", "ci": "S", "ce": "S", "cy": "S", "sc": "S",
            "sci": "S", "sce": "S", "scy": "S", "ch": "S", "s": "S",
            "si": "S", "se": "S", "sy": "S", "ss": "S", "ssi": "S",
            "sse": "S", "ssy": "S", "t": "S", "ti": "S", "te": "S",
            "ty": "S", "x": ("k", "S"),
        }),
        (_K.HARD_VOICED, {
            "d": "dZ", "di": "dZ", "de": "dZ", "dy": "dZ", "dj": "dZ",
            "g": "dZ", "gi": "dZ", "ge": "dZ", "gy": "dZ", "gg": "dZ",
            "j": "dZ", "ji": "dZ", "je": "dZ", "jy": "dZ", "z": "dZ",
            "zh": "dZ",
        }),
        (_K.HARD_VOICELESS, {
            "c": "tS", "ci": "tS", "ce": "tS", "cy": "tS", "cz": "tS",
            "t": "tS", "ti": "tS", "te": "tS", "ty": "tS",
            "z": ("t", "s"), "zz": ("t", "s"),
        }),
    ] for row in _rows(kind, table)
)

# spelling digraphs, in priority order; True marks segment-start only
_CONS_DIGRAPHS: tuple[tuple[str, tuple[str, ...], bool], ...] = (
    ("kn", ("n",), True), ("pn", ("n",), True), ("gn", ("n",), True),
    ("cn", ("n",), True),
    ("ph", ("f",), False), ("ch", ("tS",), False), ("sh", ("S",), False),
    ("ps", ("s",), True), ("rh", ("r",), True), ("pt", ("t",), True),
    ("th", (), False),   # [D] before a vowel letter, [T] otherwise
    ("gg", ("g",), False), ("ss", ("s",), False),
)

_VOICELESS_LETTERS = frozenset("cfhkptx")
_NO_SOUND = object()  # "these slots are silent, keep scanning"
_YOD_BASE = frozenset({"r", "l", "S", "tS", "Z", "dZ"})
_YOD_GA = _YOD_BASE | {"t", "d", "n"}
_ATTRACTORS = frozenset({_K.SOFT_VOICED, _K.SOFT_VOICELESS,
                         _K.HARD_VOICED, _K.HARD_VOICELESS})


def _is_affricate_of(stop: str, tok: str) -> bool:
    return (stop == "t" and tok == "tS") or (stop == "d" and tok == "dZ")


# ---------------------------------------------------------------------------
# the pipeline

class _Pipeline:
    def __init__(self, word: AnnotatedWord, dialect: Dialect | None,
                 next_starts_with_vowel: bool, trace: bool):
        self.word = word
        self.dialect = dialect
        self.next_vowel = next_starts_with_vowel
        self._source: str | None = None
        self.trace = PipelineTrace(self.source) if trace else None
        self.segs: list[_Seg] = []
        self.the_mode = (word.letters.lower() == "the"
                         and not word.annotated and not next_starts_with_vowel)
        self._items = self._ingest(word)

    @property
    def source(self) -> str:
        # rendered on demand; error and trace paths are the only consumers
        if self._source is None:
            self._source = render_word(self.word)
        return self._source

    def fail(self, unit: str, reason: str) -> NoRuleForUnit:
        return NoRuleForUnit(self.source, unit, reason)

    # -- step 0: decompose the parsed word into slots and boundaries

    def _ingest(self, word: AnnotatedWord) -> list:
        marks_by_pos: dict[int, list[tuple[int, object]]] = {}
        for mid, m in enumerate(word.marks):
            for pos in range(m.start, m.start + m.span):
                marks_by_pos.setdefault(pos, []).append((mid, m))
        gaps_by_pos: dict[int, list] = {}
        for g in word.gaps:
            gaps_by_pos.setdefault(g.index, []).append(g)

        items: list = []
        for pos, ch in enumerate(word.letters):
            for g in gaps_by_pos.get(pos, ()):
                if g.kind in SEPARATORS:
                    items.append(g.kind)
                else:
                    items.append(_Slot(_Kind.INSERT, insert=g.kind))
            if ch in ("'", "-"):
                items.append(ch)
                continue
            slot = _Slot(_Kind.LETTER, ch=ch.lower())
            silent = False
            for mid, m in marks_by_pos.get(pos, ()):
                if m.kind is AnnKind.SILENT:
                    silent = True
                elif m.kind in VOWEL_CLASSES:
                    slot.vclass, slot.vid = m.kind, mid
                    slot.vdoubled = m.doubled
                elif m.kind in CONSONANT_MARKS:
                    slot.cmark, slot.cid = m.kind, mid
                elif m.kind is AnnKind.STRESS_PRIMARY:
                    slot.stress = STRESS_PRIMARY
                elif m.kind is AnnKind.STRESS_SECONDARY:
                    slot.stress = STRESS_SECONDARY
            if silent:
                items.append(None)   # dropped by strip_silent
            else:
                items.append(slot)
        for g in gaps_by_pos.get(len(word.letters), ()):
            if g.kind in SEPARATORS:
                items.append(g.kind)
            else:
                items.append(_Slot(_Kind.INSERT, insert=g.kind))
        return items

    # -- tracing helpers

    def _slot_str(self, s: _Slot) -> str:
        if s.kind is _Kind.GHOST:
            return "."
        if s.kind is _Kind.BARRIER:
            return "|"
        if s.kind is _Kind.INSERT:
            return {"w": "+w", "y": "+y", "sch": "+@"}[s.insert.value]
        body = s.ch
        if s.cmark is not None:
            body = "\\%s%s{%s}" % (s.cmark.value, "*" if s.synth else "", body)
        if s.vclass is not None:
            body = "\\%s{%s}" % (s.vclass.value, body)
        if s.stress:
            body = ("\\st{%s}" if s.stress == STRESS_PRIMARY
                    else "\\stst{%s}") % body
        if s.cls and s.ch in "wy":
            body += ":" + s.cls
        return body

    def _snap_slots(self) -> str:
        return "".join("(%s)" % "".join(self._slot_str(s) for s in seg.slots)
                       for seg in self.segs)

    def _snap_units(self, stress: bool = False, marks: bool = False) -> str:
        parts = []
        for seg in self.segs:
            bits = []
            for u in seg.units:
                txt = "".join(self._slot_str(s) for s in u.slots)
                if stress and u.stress:
                    txt = u.stress + txt
                if marks and u.vowel:
                    letters = [s for s in u.slots if s.letter]
                    if letters and letters[0].vclass is not None:
                        tag = letters[0].vclass.value
                    elif len(letters) > 1:
                        tag = "two"
                    elif u.stress:
                        tag = "nat" if u.natural else "pln"
                    else:
                        tag = "un"
                    if u.rhotic:
                        tag += "+r"
                    txt += ":" + tag
                bits.append(("{%s}" if u.vowel else "<%s>") % txt)
            parts.append("(%s)" % " ".join(bits))
        return "".join(parts)

    def _snap_tokens(self) -> str:
        out = []
        for seg in self.segs:
            out.append("(%s)" % render_ascii_ipa(tuple(seg.tokens)))
        return "".join(out)

    def _record(self, op: str, snap) -> None:
        # snap is a thunk so snapshots cost nothing when tracing is off
        if self.trace is not None:
            self.trace.add(op, snap())

    # -- step 1

    def strip_silent(self) -> None:
        self._items = [it for it in self._items if it is not None]
        if self.trace is not None:
            txt = "".join(
                it if isinstance(it, str)
                else "\\%s{}" % it.value if isinstance(it, AnnKind)
                else self._slot_str(it)
                for it in self._items)
            self._record("strip_silent", lambda: txt)

    # -- step 2

    def segment(self) -> None:
        segs: list[_Seg] = []
        cur: list[_Slot] = []
        lead: object = None
        items = self._items
        i = 0
        while i < len(items):
            it = items[i]
            if isinstance(it, _Slot):
                cur.append(it)
            elif it == "'":
                nxt = items[i + 1] if i + 1 < len(items) else None
                if isinstance(nxt, _Slot) and nxt.ch == "r":
                    pass     # 're contraction: drop the apostrophe, no split
                else:
                    segs.append(_Seg(cur, lead))
                    cur, lead = [], "'"
            elif it == "-":
                segs.append(_Seg(cur, lead))
                cur, lead = [], "-"
            else:            # separator kind
                segs.append(_Seg(cur, lead))
                cur, lead = [], it
            i += 1
        segs.append(_Seg(cur, lead))
        self.segs = [s for s in segs if s.slots]
        if self.segs:
            self.segs[0].lead = None
        self._record("segment", self._snap_slots)

    # -- step 3

    def critical_digraphs(self) -> None:
        for seg in self.segs:
            self._rule_ng(seg)
            self._rule_gh(seg)
            self._rule_wh(seg)
            self._rule_wr(seg)
            self._rule_qu(seg)
            self._rule_gu(seg)
            self._rule_vh(seg)
        self._record("digraphs", self._snap_slots)

    @staticmethod
    def _next_letter(seg: _Seg, i: int) -> _Slot | None:
        for s in seg.slots[i:]:
            if s.letter:
                return s
        return None

    def _rule_ng(self, seg: _Seg) -> None:
        slots = seg.slots
        i = 0
        while i < len(slots) - 1:
            n, g = slots[i], slots[i + 1]
            if not (n.letter and n.ch == "n" and g.letter and g.ch == "g"):
                i += 1
                continue
            if n.unannotated and g.cmark is AnnKind.COMMON and not g.synth:
                n.cmark, n.synth = AnnKind.COMMON, True
                n.cid = -2 - i
                i += 2
                continue
            if not (n.unannotated and g.unannotated):
                i += 1
                continue
            nxt = self._next_letter(seg, i + 2)
            if nxt is None:
                n.cmark, n.synth, n.cid = AnnKind.COMMON, True, -2 - i
                del slots[i + 1]
            elif nxt.ch in "eiy":
                pass
            elif nxt.ch in "lraou":
                n.cmark, n.synth, n.cid = AnnKind.COMMON, True, -2 - i
                g.cmark, g.synth, g.cid = AnnKind.COMMON, True, -3 - i
            elif nxt.ch not in _VOWEL_LETTERS:
                n.cmark, n.synth, n.cid = AnnKind.COMMON, True, -2 - i
                del slots[i + 1]
            i += 2
        # annotated soft g after n: the n keeps its own sound
        # (n\hvo{g}, n\svo{g} need nothing)

    def _rule_gh(self, seg: _Seg) -> None:
        slots = seg.slots
        i = 0
        while i < len(slots) - 1:
            g, h = slots[i], slots[i + 1]
            if (g.letter and g.ch == "g" and h.letter and h.ch == "h"
                    and g.unannotated and h.unannotated):
                slots[i:i + 2] = [_Slot(_Kind.GHOST)]
            i += 1

    def _rule_wh(self, seg: _Seg) -> None:
        slots = seg.slots
        i = 0
        while i < len(slots) - 1:
            w, h = slots[i], slots[i + 1]
            if (w.letter and w.ch == "w" and h.letter and h.ch == "h"
                    and w.unannotated and h.unannotated):
                prev = slots[i - 1] if i else None
                at_start = prev is None
                after_cons = (prev is not None and prev.letter
                              and prev.ch not in _VOWEL_LETTERS
                              and prev.ch not in "wy")
                if at_start or after_cons:
                    del slots[i + 1]
            i += 1

    def _rule_wr(self, seg: _Seg) -> None:
        slots = seg.slots
        i = 0
        while i < len(slots) - 1:
            w, r = slots[i], slots[i + 1]
            if (w.letter and w.ch == "w" and r.letter and r.ch == "r"
                    and w.unannotated and r.unannotated):
                prev = slots[i - 1] if i else None
                after_vowel = (prev is not None and prev.letter
                               and prev.ch in _VOWEL_LETTERS)
                if not after_vowel:
                    del slots[i]
                    continue
            i += 1

    def _rule_qu(self, seg: _Seg) -> None:
        slots = seg.slots
        for i in range(len(slots) - 1):
            q, u = slots[i], slots[i + 1]
            if not (q.letter and q.ch == "q" and q.unannotated
                    and u.letter and u.ch == "u" and u.unannotated):
                continue
            nxt = slots[i + 2] if i + 2 < len(slots) else None
            if nxt is not None and nxt.letter and nxt.ch in "aeiouy":
                u.cmark, u.synth, u.cid = AnnKind.SEMI_W, True, -100 - i

    def _rule_gu(self, seg: _Seg) -> None:
        slots = seg.slots
        i = 0
        while i < len(slots) - 1:
            g, u = slots[i], slots[i + 1]
            g_ok = (g.letter and g.ch == "g"
                    and (g.unannotated or g.cmark is AnnKind.COMMON))
            if not (g_ok and u.letter and u.ch == "u" and u.unannotated):
                i += 1
                continue
            nxt = slots[i + 2] if i + 2 < len(slots) else None
            nxt_ch = nxt.ch if nxt is not None and nxt.letter else ""
            if nxt_ch and nxt_ch in "aou":
                if g.cmark is None:
                    g.cmark, g.synth, g.cid = AnnKind.COMMON, True, -200 - i
                u.cmark, u.synth, u.cid = AnnKind.SEMI_W, True, -201 - i
            elif nxt_ch and nxt_ch in "eiy":
                if g.cmark is None:
                    g.cmark, g.synth, g.cid = AnnKind.COMMON, True, -200 - i
                del slots[i + 1]
            i += 1

    def _rule_vh(self, seg: _Seg) -> None:
        slots = seg.slots
        i = 1
        while i < len(slots):
            h = slots[i]
            if not (h.letter and h.ch == "h" and h.unannotated):
                i += 1
                continue
            prev = slots[i - 1]
            if not (prev.letter and (prev.ch in _VOWEL_LETTERS
                                     or prev.ch in "wy")):
                i += 1
                continue
            nxt = slots[i + 1] if i + 1 < len(slots) else None
            at_end = nxt is None
            before_cons = (nxt is not None and nxt.letter
                           and nxt.ch not in _VOWEL_LETTERS)
            if at_end or before_cons:
                slots[i] = _Slot(_Kind.BARRIER)
            i += 1

    # -- steps 4 and 5

    def classify_and_group(self) -> None:
        for seg in self.segs:
            self._classify(seg)
        self._record("classify", self._snap_slots)
        for seg in self.segs:
            self._build_units(seg)
        self._record("units", self._snap_units)

    def _classify(self, seg: _Seg) -> None:
        slots = seg.slots

        def resolve(i: int) -> str:
            s = slots[i]
            if s.cls:
                return s.cls
            if s.kind is _Kind.INSERT:
                s.cls = "V" if s.insert is AnnKind.SCHWA_INSERT else "C"
                return s.cls
            if not s.letter:
                return ""
            if s.vclass is not None:
                s.cls = "V"
            elif s.cmark is not None:
                s.cls = "C"
            elif s.ch in _VOWEL_LETTERS:
                s.cls = "V"
            elif s.ch not in "wy":
                s.cls = "C"
            else:
                s.cls = self._classify_wy(seg, i, resolve)
            return s.cls

        for i in range(len(slots)):
            resolve(i)

    def _classify_wy(self, seg: _Seg, i: int, resolve) -> str:
        slots = seg.slots
        s = slots[i]
        if s.stress:
            return "V"
        prev = slots[i - 1] if i else None
        if (prev is not None and prev.letter and prev.ch in "aeo"
                and prev.cls == "V" and prev.cmark is None):
            return "V"                       # ay ey oy aw ew ow digraph
        j = i + 1
        while j < len(slots) and slots[j].kind is _Kind.GHOST:
            j += 1
        nxt = slots[j] if j < len(slots) else None
        if nxt is None or nxt.kind is _Kind.BARRIER:
            return "V"                       # segment end
        if nxt.kind is _Kind.INSERT and \
                nxt.insert is not AnnKind.SCHWA_INSERT:
            return "V"                       # \w{} or \y{} follows
        if nxt.letter:
            if nxt.cmark is not None:
                return "V"
            if nxt.vclass is None and nxt.ch not in _VOWEL_LETTERS:
                if nxt.ch not in "wy":
                    return "V"               # sure consonant follows
                if resolve(j) == "C":
                    return "V"
        if s.ch == "y":
            if prev is not None and prev.cls == "C":
                return "V"
        return "C"

    def _build_units(self, seg: _Seg) -> None:
        slots = seg.slots
        units: list[_Unit] = []
        i = 0
        while i < len(slots):
            s = slots[i]
            if s.kind in (_Kind.GHOST, _Kind.BARRIER):
                if s.kind is _Kind.GHOST and units and units[-1].vowel:
                    units[-1].ghost_after = True
                units.append(_Unit(False, [s]))
                i += 1
                continue
            if s.cls == "V":
                j = i + 1
                while j < len(slots) and slots[j].kind is _Kind.GHOST:
                    j += 1
                pair = None
                if j < len(slots) and slots[j].cls == "V":
                    if self._pairs(s, slots[j]):
                        pair = j
                if pair is not None:
                    unit = _Unit(True, slots[i:pair + 1])
                    i = pair + 1
                else:
                    unit = _Unit(True, [s])
                    i += 1
                units.append(unit)
                continue
            # consonant run
            j = i
            while j < len(slots) and slots[j].cls == "C":
                j += 1
            units.append(_Unit(False, slots[i:j]))
            i = j
        seg.units = units

    @staticmethod
    def _pairs(a: _Slot, b: _Slot) -> bool:
        if a.kind is _Kind.INSERT or b.kind is _Kind.INSERT:
            return False
        if a.vid >= 0 and a.vid == b.vid:
            return True                      # span-2 class mark
        if b.vclass is not None or b.stress:
            return False
        if a.vclass is not None:
            return b.ch in "wy"              # the w/y goes silent
        return a.ch + b.ch in _DIGRAPH_PAIRS

    # -- step 6

    def assign_stress(self) -> None:
        domains: list[list[_Seg]] = []
        for seg in self.segs:
            if seg.breaks_domain or not domains:
                domains.append([seg])
            else:
                domains[-1].append(seg)
        levels = ["P"] + ["U"] * (len(domains) - 1)
        if self.the_mode:
            levels = ["U"] * len(domains)
        for d in range(1, len(domains)):
            lead = domains[d][0].lead
            if lead is AnnKind.SEP_LEFT:
                levels[d - 1], levels[d] = "P", "U"
            elif lead is AnnKind.SEP_RIGHT:
                levels[d - 1], levels[d] = "U", "P"
            elif lead is AnnKind.SEP_LEFT_RIGHT:
                levels[d - 1], levels[d] = "P", "S"
            elif lead is AnnKind.SEP_RIGHT_LEFT:
                levels[d - 1], levels[d] = "S", "P"
        for domain, level in zip(domains, levels):
            self._stress_domain(domain, level)
        self._record("stress", lambda: self._snap_units(stress=True))

    def _stress_domain(self, domain: list[_Seg], level: str) -> None:
        units = [u for seg in domain for u in seg.units if u.vowel]
        saw_st = False
        saw_stst = False
        for u in units:
            marks = {s.stress for s in u.slots if s.stress}
            if STRESS_PRIMARY in marks:
                u.stress = STRESS_PRIMARY
                saw_st = True
            elif STRESS_SECONDARY in marks:
                u.stress = STRESS_SECONDARY
                saw_stst = True
        if level in ("P", "S") and not saw_st:
            target = self._default_target(domain, units)
            if target is not None and not target.stress:
                target.stress = (STRESS_PRIMARY if level == "P"
                                 else STRESS_SECONDARY)
        self._infer_secondary(units, saw_stst)

    @staticmethod
    def _default_target(domain: list[_Seg], units: list[_Unit]):
        eligible = [u for u in units if u.letter_backed]
        if not eligible:
            return None
        # a soft/hard consonant mark pulls default stress to the unit
        # before its group; the rightmost such group wins
        attractor = None
        seq: list[_Unit] = [u for seg in domain for u in seg.units]
        for idx, u in enumerate(seq):
            if not u.vowel and any(s.cmark in _ATTRACTORS for s in u.slots):
                attractor = idx
        if attractor is not None:
            before = [u for u in seq[:attractor]
                      if u.vowel and u.letter_backed]
            if before:
                return before[-1]
        return eligible[0]

    @staticmethod
    def _infer_secondary(units: list[_Unit], saw_stst: bool) -> None:
        if saw_stst:
            return
        prim = [i for i, u in enumerate(units)
                if u.stress == STRESS_PRIMARY]
        if len(prim) != 1 or prim[0] < 2:
            return
        target = units[prim[0] - 2]
        if target.letter_backed and not target.stress:
            target.stress = STRESS_SECONDARY
            target.inferred = True

    # -- step 7

    def categorize_vowels(self) -> None:
        for seg in self.segs:
            for idx, u in enumerate(seg.units):
                if not u.vowel:
                    continue
                u.rhotic = self._rhotic(seg, idx, u)
                if (len([s for s in u.slots if s.letter]) == 1
                        and u.slots and u.slots[0].vclass is None
                        and u.stress and u.slots[0].letter):
                    u.natural = self._natural(seg, idx, u)
        self._record("categorize",
                     lambda: self._snap_units(stress=True, marks=True))

    def _natural(self, seg: _Seg, idx: int, unit: _Unit) -> bool:
        if unit.ghost_after:
            return True
        following = [u for u in seg.units[idx + 1:]
                     if u.slots[0].kind not in (_Kind.BARRIER, _Kind.GHOST)]
        if not following:
            return True                      # segment end
        nxt = following[0]
        if nxt.vowel:
            return True
        if len(following) >= 2 and following[1].vowel:
            if self._single_group(nxt):
                return True
        return False

    @staticmethod
    def _single_group(group: _Unit) -> bool:
        slots = [s for s in group.slots if s.letter or s.kind is _Kind.INSERT]
        letters = "".join(s.ch for s in slots if s.letter)
        cons_letters = [s for s in slots
                        if (s.letter and s.ch not in _VOWEL_LETTERS)
                        or s.cmark is AnnKind.SEMI_W
                        or s.kind is _Kind.INSERT]
        marks = [s.cmark for s in slots if s.cmark is not None]
        if any(m is AnnKind.SEMI_W or m is AnnKind.SEMI_Y for m in marks):
            return False                     # kw, gw, \y groups are complex
        if AnnKind.COMMON in marks and any(
                s.cmark is AnnKind.COMMON and s.ch == "r" for s in slots):
            return False                     # \co{r} is complex
        if "x" in letters:
            return False
        if len(cons_letters) == 1:
            return True
        if (len(slots) == 2 and not marks
                and slots[0].letter and slots[1].letter
                and slots[1].ch in "lr" and slots[0].ch not in "lr"):
            return True
        return False

    def _rhotic(self, seg: _Seg, idx: int, unit: _Unit) -> bool:
        letters = [s for s in unit.slots if s.letter]
        two = len(letters) == 2
        if not two and not unit.stress:
            return False
        # find the next sounding slot in the segment
        after: list[_Slot] = []
        found = False
        for u in seg.units:
            if u is unit:
                found = True
                continue
            if found:
                after.extend(u.slots)
        after = [s for s in after
                 if s.kind not in (_Kind.BARRIER, _Kind.GHOST)]
        if not after:
            return False
        nxt = after[0]
        if not nxt.letter:
            return False
        if nxt.ch == "l" and nxt.cmark is AnnKind.COMMON:
            return True                      # \co{l} sounds r and colours
        if nxt.ch != "r":
            return False
        if nxt.cmark is AnnKind.COMMON:
            return False                     # \co{r} never colours
        if len(after) > 1 and after[1].letter and after[1].ch == "r" \
                and after[1].cmark is None:
            third = after[2] if len(after) > 2 else None
            return not (third is not None and third.cls == "V")
        return True

    # -- step 8

    def evaluate_vowels(self) -> None:
        for seg in self.segs:
            for u in seg.units:
                if u.vowel:
                    u.tokens = self._vowel_value(seg, u)
        self._record("vowels", self._snap_tokens_units)

    def _vowel_value(self, seg: _Seg, unit: _Unit) -> list[str]:
        slots = [s for s in unit.slots if s.letter]
        if not slots:                        # insertion
            ins = unit.slots[0].insert
            return {"sch": ["@"], "w": ["w"], "y": ["j"]}[ins.value]
        first = slots[0]
        letters = unit.letters
        if first.vclass is not None:
            if letters in ("gh", "g", "h") and first.vclass is AnnKind.OPAQUE:
                return ["@"]                 # \oopq{gh}
            col = _COLUMN.get(first.ch)
            row = _CLASS_TABLE.get(first.vclass, {})
            cell = row.get(col)
            if cell is None:
                raise self.fail("\\%s{%s}" % (first.vclass.value, letters),
                                "no vowel value for this class and letter")
            value, rvalue = cell
            if unit.rhotic and rvalue is not None:
                return list(rvalue)
            return list(value)
        if len(slots) == 2:
            pair = letters
            if slots[1].ch in "wy" and pair not in _PAIR_TABLE:
                pair = None
            entry = _PAIR_TABLE.get(pair or "")
            if entry is None:
                raise self.fail(letters, "no value for this vowel pair")
            stressed, s_rh, unstressed, u_rh = entry
            if unit.stress:
                cell = s_rh if unit.rhotic else stressed
            else:
                base = unstressed if unstressed is not None else stressed
                base_rh = u_rh if u_rh is not None else s_rh
                cell = base_rh if unit.rhotic else base
            return list(cell)
        # single unannotated letter
        ch = first.ch
        if unit.stress:
            kind = AnnKind.NATURAL if unit.natural else AnnKind.PLAIN
            value, rvalue = _CLASS_TABLE[kind][_COLUMN[ch]]
            if unit.rhotic and rvalue is not None:
                return list(rvalue)
            return list(value)
        return self._unstressed_single(seg, first, ch)

    def _unstressed_single(self, seg: _Seg, slot: _Slot,
                           ch: str) -> list[str]:
        letters = [s for s in seg.slots if s.letter]
        pos = letters.index(slot)
        last = pos == len(letters) - 1
        nxt = letters[pos + 1] if pos + 1 < len(letters) else None
        nxt2 = letters[pos + 2] if pos + 2 < len(letters) else None
        if ch == "a":
            return ["@"]
        if ch == "e":
            if self.the_mode:
                return ["@"]
            if last:
                return []
            if nxt is not None and nxt2 is None and nxt.ch in ("d", "s"):
                return []
            return ["@"]
        if ch in ("i", "y"):
            return ["I"]
        if ch == "o":
            if last:
                return ["oU"]
            if nxt is not None and nxt2 is None and nxt.ch == "s":
                return ["oU"]
            if (nxt is not None and nxt.ch == "e" and nxt2 is not None
                    and nxt2.ch == "s" and pos + 3 == len(letters)):
                return ["oU"]
            return ["@"]
        return ["@"]                         # u, w

    # -- step 9

    def consonant_digraphs(self) -> None:
        for seg in self.segs:
            for idx, group in enumerate(seg.units):
                if group.vowel or not group.slots[0].letter:
                    continue
                self._split_group(seg, idx, group)
        self._record("cons_digraphs", lambda: self._snap_units(stress=True))

    def _split_group(self, seg: _Seg, gidx: int, group: _Unit) -> None:
        slots = group.slots
        consumed: dict[int, tuple[str, ...]] = {}
        taken = [s.cmark is not None or not s.letter for s in slots]
        seg_start = seg.units[0] is group or all(
            len(u.slots) == 1 and u.slots[0].kind is _Kind.BARRIER
            for u in seg.units[:gidx])
        for pair, sound, start_only in _CONS_DIGRAPHS:
            for i in range(len(slots) - 1):
                if taken[i] or taken[i + 1]:
                    continue
                if slots[i].ch + slots[i + 1].ch != pair:
                    continue
                if not slots[i].unannotated or not slots[i + 1].unannotated:
                    continue
                if start_only and not (seg_start and i == 0):
                    continue
                if pair == "th":
                    nxt = None
                    if i + 2 < len(slots):
                        nxt = slots[i + 2]
                    else:
                        rest = [s for u in seg.units[gidx + 1:]
                                for s in u.slots]
                        nxt = rest[0] if rest else None
                    voweley = (nxt is not None and nxt.letter
                               and nxt.ch in "aeiouy")
                    sound = ("D",) if voweley else ("T",)
                taken[i] = taken[i + 1] = True
                consumed[i] = sound
        group.dig = consumed   # type: ignore[attr-defined]

    # -- step 10

    def evaluate_consonants(self) -> None:
        # groups holding a free-standing s wait until their neighbors have
        # sounds, since s voicing depends on them
        deferred: list[tuple[_Seg, int, _Unit]] = []
        for seg in self.segs:
            for idx, group in enumerate(seg.units):
                if group.vowel:
                    continue
                if group.slots[0].kind in (_Kind.GHOST, _Kind.BARRIER):
                    group.tokens = []
                    continue
                if self._has_free_s(group):
                    deferred.append((seg, idx, group))
                else:
                    group.tokens = self._group_tokens(seg, idx, group)
        for seg, idx, group in deferred:
            group.tokens = self._group_tokens(seg, idx, group)
        self._record("consonants", self._snap_tokens_units)

    @staticmethod
    def _has_free_s(group: _Unit) -> bool:
        dig: dict[int, tuple[str, ...]] = getattr(group, "dig", {})
        covered = set()
        for start in dig:
            covered.update((start, start + 1))
        return any(s.letter and s.ch == "s" and s.cmark is None
                   and i not in covered
                   for i, s in enumerate(group.slots))

    def _snap_tokens_units(self) -> str:
        parts = []
        for seg in self.segs:
            bits = []
            for u in seg.units:
                txt = render_ascii_ipa(tuple(u.tokens)) if u.tokens else "-"
                if u.vowel and u.stress:
                    txt = u.stress + txt
                bits.append(txt)
            parts.append("(%s)" % " ".join(bits))
        return "".join(parts)

    def _group_tokens(self, seg: _Seg, gidx: int,
                      group: _Unit) -> list[str]:
        slots = group.slots
        dig: dict[int, tuple[str, ...]] = getattr(group, "dig", {})
        tokens: list[str] = []
        i = 0
        while i < len(slots):
            s = slots[i]
            if s.kind is _Kind.INSERT:
                tokens.append("w" if s.insert is AnnKind.SEMI_W else "j")
                i += 1
                continue
            if i in dig:
                tokens.extend(dig[i])
                i += 2
                continue
            if s.cmark is not None:
                j = i
                while j < len(slots) and slots[j].cmark is s.cmark \
                        and slots[j].cid == s.cid:
                    j += 1
                letters = "".join(t.ch for t in slots[i:j])
                tokens.extend(self._marked_value(s.cmark, letters))
                i = j
                continue
            tokens.extend(self._plain_consonant(seg, gidx, group, i))
            i += 1
        return tokens

    def _marked_value(self, kind: AnnKind, letters: str) -> tuple[str, ...]:
        if kind is AnnKind.SEMI_W:
            return ("w",)
        if kind is AnnKind.SEMI_Y:
            if letters in ("i", "y", "j", "l", "ll", ""):
                return ("j",)
            raise self.fail("\\y{%s}" % letters, "no sound for this group")
        value = _MARKED_CONS.get((kind, letters))
        if value is None:
            raise self.fail("\\%s{%s}" % (kind.value, letters),
                            "no sound for this mark and letters")
        return value

    def _plain_consonant(self, seg: _Seg, gidx: int, group: _Unit,
                         i: int) -> tuple[str, ...]:
        slots = group.slots
        s = slots[i]
        ch = s.ch
        nxt_slot = slots[i + 1] if i + 1 < len(slots) else None
        if nxt_slot is None:
            rest = [t for u in seg.units[gidx + 1:] for t in u.slots
                    if t.letter]
            nxt_slot = rest[0] if rest else None
        nxt_ch = nxt_slot.ch if nxt_slot is not None and nxt_slot.letter \
            else ""
        simple = {"b": "b", "d": "d", "f": "f", "j": "dZ", "k": "k",
                  "l": "l", "m": "m", "p": "p", "q": "k", "r": "r",
                  "t": "t", "v": "v", "w": "w", "y": "j", "z": "z"}
        if ch in simple:
            return (simple[ch],)
        if ch == "c":
            return ("s",) if nxt_ch and nxt_ch in "eiy" else ("k",)
        if ch == "g":
            return ("dZ",) if nxt_ch and nxt_ch in "eiy" else ("g",)
        if ch == "h":
            if self._word_final(seg, s):
                return ()
            return ("h",)
        if ch == "n":
            if nxt_ch == "k":
                return ("N",)
            if nxt_slot is not None and nxt_slot.letter \
                    and nxt_slot.ch == "c":
                if nxt_slot.cmark is AnnKind.COMMON:
                    return ("N",)
                after = self._slot_after(seg, nxt_slot)
                if after is not None and after.letter \
                        and after.ch in "aouw":
                    return ("N",)
            return ("n",)
        if ch == "x":
            stressed_next = self._next_vowel_stressed(seg, gidx, group, i)
            return ("g", "z") if stressed_next else ("k", "s")
        if ch == "s":
            return (self._s_value(seg, gidx, group, i),)
        if ch == "u":                        # synthetic w handled by cmark
            raise self.fail(ch, "vowel letter in a consonant group")
        raise self.fail(ch, "no consonant rule for this letter")

    def _word_final(self, seg: _Seg, slot: _Slot) -> bool:
        if seg is not self.segs[-1]:
            return False
        letters = [s for s in seg.slots if s.letter]
        return bool(letters) and letters[-1] is slot

    @staticmethod
    def _slot_after(seg: _Seg, slot: _Slot) -> _Slot | None:
        found = False
        for s in seg.slots:
            if s is slot:
                found = True
                continue
            if found and s.letter:
                return s
            if found and s.kind is _Kind.INSERT:
                return s
        return None

    def _next_vowel_stressed(self, seg: _Seg, gidx: int, group: _Unit,
                             i: int) -> bool:
        if i + 1 < len(group.slots):
            return False                     # not group-final: nothing follows
        for u in seg.units[gidx + 1:]:
            if len(u.slots) == 1 and u.slots[0].kind in (_Kind.GHOST,
                                                         _Kind.BARRIER):
                continue
            return bool(u.vowel and u.stress)
        return False

    def _s_value(self, seg: _Seg, gidx: int, group: _Unit, i: int) -> str:
        letters = [s for s in seg.slots if s.letter]
        s = group.slots[i]
        if len(letters) == 1:                # lone-s segment: look left
            prev_seg = self._prev_seg(seg)
            return "z" if self._ends_voiced(prev_seg) else "s"
        if letters and letters[0] is s:
            return "s"                       # segment-initial
        prev_snd = self._neighbor_sound(seg, s, -1)
        next_snd = self._neighbor_sound(seg, s, +1)
        if (prev_snd and prev_snd in VOICELESS) or \
                (next_snd and next_snd in VOICELESS):
            return "s"
        nxt_letter = None
        idx = letters.index(s)
        if idx + 1 < len(letters):
            nxt_letter = letters[idx + 1].ch
        if prev_snd and prev_snd in CONSONANT_SET and \
                nxt_letter in ("a", "e", "i", "o", "u", "y"):
            return "s"
        return "z"

    def _prev_seg(self, seg: _Seg) -> _Seg | None:
        idx = self.segs.index(seg)
        return self.segs[idx - 1] if idx else None

    @staticmethod
    def _ends_voiced(seg: _Seg | None) -> bool:
        if seg is None:
            return False
        for u in reversed(seg.units):
            if not u.tokens:
                continue
            last = u.tokens[-1]
            return last not in VOICELESS
        return False

    def _neighbor_sound(self, seg: _Seg, slot: _Slot,
                        direction: int) -> str | None:
        # nearest sounding token next to the slot, skipping silent units
        units = seg.units
        uidx = sidx = None
        for ui, u in enumerate(units):
            for si, s in enumerate(u.slots):
                if s is slot:
                    uidx, sidx = ui, si
        if uidx is None:
            return None
        unit = units[uidx]
        if direction < 0:
            before = unit.slots[:sidx]
            if before:
                sub = self._boundary_sound(seg, uidx, before, tail=True)
                if sub is not _NO_SOUND:
                    return sub
            rng = range(uidx - 1, -1, -1)
        else:
            after_slots = unit.slots[sidx + 1:]
            if after_slots:
                sub = self._boundary_sound(seg, uidx, after_slots,
                                           tail=False)
                if sub is not _NO_SOUND:
                    return sub
            rng = range(uidx + 1, len(units))
        for ui in rng:
            u = units[ui]
            if u.vowel:
                if u.tokens:
                    return u.tokens[-1 if direction < 0 else 0]
                continue                     # silent vowel: look through
            if u.slots[0].kind in (_Kind.GHOST, _Kind.BARRIER):
                continue
            if u.tokens:
                return u.tokens[-1 if direction < 0 else 0]
            sub = self._boundary_sound(seg, ui, u.slots,
                                       tail=(direction < 0))
            if sub is not _NO_SOUND:
                return sub
        return None

    def _boundary_sound(self, seg: _Seg, uidx: int, slots: list[_Slot],
                        tail: bool):
        # nearest sound inside a consonant run without resolving any s,
        # so two s letters can never ask each other for their voicing
        chunks = self._chunk_sounds(seg, uidx, slots)
        for chunk in (reversed(chunks) if tail else chunks):
            if chunk is None:
                return None                  # unresolved s: no information
            if chunk:
                return chunk[-1] if tail else chunk[0]
        return _NO_SOUND

    def _chunk_sounds(self, seg: _Seg, uidx: int,
                      slots: list[_Slot]) -> list[tuple[str, ...] | None]:
        group = seg.units[uidx]
        dig: dict[int, tuple[str, ...]] = getattr(group, "dig", {})
        chunks: list[tuple[str, ...] | None] = []
        base = group.slots.index(slots[0])
        i = 0
        while i < len(slots):
            s = slots[i]
            gi = base + i
            if s.kind is _Kind.INSERT:
                chunks.append(("w" if s.insert is AnnKind.SEMI_W else "j",))
                i += 1
                continue
            if gi in dig:
                chunks.append(dig[gi])
                i += 2
                continue
            if s.cmark is not None:
                j = i
                while j < len(slots) and slots[j].cmark is s.cmark \
                        and slots[j].cid == s.cid:
                    j += 1
                letters = "".join(t.ch for t in slots[i:j])
                try:
                    chunks.append(self._marked_value(s.cmark, letters))
                except NoRuleForUnit:
                    chunks.append(None)
                i = j
                continue
            if s.ch == "s":
                chunks.append(None)
                i += 1
                continue
            try:
                chunks.append(self._plain_consonant(seg, uidx, group,
                                                    group.slots.index(s)))
            except NoRuleForUnit:
                chunks.append(None)
            i += 1
        return chunks

    # -- step 11

    def recompose(self) -> None:
        for seg in self.segs:
            toks: list[str] = []
            for u in seg.units:
                if u.vowel and u.stress and u.tokens:
                    placed = False
                    for t in u.tokens:
                        if not placed and t not in ("w", "j", "(j)"):
                            toks.append(u.stress)
                            placed = True
                        toks.append(t)
                    if not placed:
                        pass
                else:
                    toks.extend(u.tokens)
            seg.tokens = toks
        self._record("recompose", self._snap_tokens)

    # -- step 12

    def postprocess(self) -> None:
        self._collapse()
        for seg in self.segs:
            seg.tokens = self._schwa_r(seg.tokens)
        if self.dialect is Dialect.GA:
            mapping = {"K": "r", "3:": "3", "6": "A", "A:": "A",
                       "i:": "i", "O:": "O", "u:": "u"}
            for seg in self.segs:
                seg.tokens = [mapping.get(t, t) for t in seg.tokens]
        elif self.dialect is Dialect.RP:
            self._rp()
        else:
            self._neutral_kr()
        self._yod()
        self._collapse()
        self._record("postprocess", self._snap_tokens)

    def _neutral_kr(self) -> None:
        # the offglide K already covers a following r unless that r
        # sounds again before a vowel
        flat = [(si, ti) for si, seg in enumerate(self.segs)
                for ti in range(len(seg.tokens))]
        drop: list[tuple[int, int]] = []
        for n, (si, ti) in enumerate(flat):
            if self.segs[si].tokens[ti] != "r" or n == 0:
                continue
            psi, pti = flat[n - 1]
            if self.segs[psi].tokens[pti] != "K":
                continue
            nxt = None
            for m in range(n + 1, len(flat)):
                t = self.segs[flat[m][0]].tokens[flat[m][1]]
                if t in STRESS_SET or t == JOINT:
                    continue
                nxt = t
                break
            keep = self.next_vowel if nxt is None else nxt in VOWEL_SET
            if not keep:
                drop.append((si, ti))
        for si, ti in reversed(drop):
            del self.segs[si].tokens[ti]

    def _collapse(self) -> None:
        for si, seg in enumerate(self.segs):
            out: list[str] = []
            for t in seg.tokens:
                if out and t in CONSONANT_SET and (
                        out[-1] == t or _is_affricate_of(out[-1], t)):
                    out[-1] = t
                    continue
                out.append(t)
            seg.tokens = out
        # across seamlessly joined segments
        for si in range(1, len(self.segs)):
            seg = self.segs[si]
            if seg.joint or not seg.tokens:
                continue
            prev = self.segs[si - 1]
            if prev.tokens and seg.tokens and (
                    prev.tokens[-1] == seg.tokens[0]
                    or _is_affricate_of(prev.tokens[-1], seg.tokens[0])) \
                    and seg.tokens[0] in CONSONANT_SET:
                prev.tokens.pop()

    @staticmethod
    def _schwa_r(tokens: list[str]) -> list[str]:
        if not tokens:
            return tokens
        r_at = None
        if tokens[-1] == "r":
            r_at = len(tokens) - 1
        elif len(tokens) >= 2 and tokens[-1] in ("s", "z") \
                and tokens[-2] == "r":
            r_at = len(tokens) - 2
        if r_at is None or r_at == 0:
            return tokens
        prev = tokens[r_at - 1]
        if prev in CONSONANT_SET and prev != "r":
            return tokens[:r_at] + ["@"] + tokens[r_at:]
        return tokens

    def _rp(self) -> None:
        for seg in self.segs:
            out: list[str] = []
            for t in seg.tokens:
                out.extend(("@", "r") if t == "K" else (t,))
            seg.tokens = out
        flat: list[tuple[int, int]] = [
            (si, ti) for si, seg in enumerate(self.segs)
            for ti in range(len(seg.tokens))]

        def tok(n: int) -> str:
            si, ti = flat[n]
            return self.segs[si].tokens[ti]

        drop: list[tuple[int, int]] = []
        for n, (si, ti) in enumerate(flat):
            if tok(n) != "r":
                continue
            nxt = None
            for m in range(n + 1, len(flat)):
                t = tok(m)
                if t in STRESS_SET:
                    continue
                nxt = t
                break
            if nxt is None:
                keep = self.next_vowel
            else:
                keep = nxt in VOWEL_SET
            if not keep:
                drop.append((si, ti))
        for si, ti in reversed(drop):
            del self.segs[si].tokens[ti]
        for seg in self.segs:
            seg.tokens = ["@U" if t == "oU" else t for t in seg.tokens]

    def _yod(self) -> None:
        drop_after = _YOD_GA if self.dialect is Dialect.GA else _YOD_BASE
        prev_sound: str | None = None
        for seg in self.segs:
            if seg.joint:
                prev_sound = None
            for i, t in enumerate(seg.tokens):
                if t == "(j)":
                    seg.tokens[i] = "" if prev_sound in drop_after else "j"
                elif t not in STRESS_SET:
                    prev_sound = t
            seg.tokens = [t for t in seg.tokens if t]

    # -- driver

    _OPS = ("strip_silent", "segment", "critical_digraphs",
            "classify_and_group", "assign_stress", "categorize_vowels",
            "evaluate_vowels", "consonant_digraphs", "evaluate_consonants",
            "recompose", "postprocess")

    def run(self) -> IpaTranscription:
        for op in self._OPS:
            getattr(self, op)()
        tokens: list[str] = []
        for seg in self.segs:
            if seg.joint and tokens:
                tokens.append(JOINT)
            tokens.extend(seg.tokens)
        syllables = sum(1 for seg in self.segs for u in seg.units
                        if u.vowel and u.tokens)
        return IpaTranscription(tuple(tokens), syllables, self.trace)


def interpret_word(word: AnnotatedWord | str, dialect: Dialect | None = None,
                   *, next_starts_with_vowel: bool = False,
                   trace: bool = False) -> IpaTranscription:
    """Interprets one annotated word; raises NoRuleForUnit when stuck."""
    if isinstance(word, str):
        word = parse_word(word)
    pipe = _Pipeline(word, dialect, next_starts_with_vowel, trace)
    return pipe.run()


def _first_sound_is_vowel(result: IpaTranscription | None) -> bool:
    if result is None:
        return False
    for t in result.tokens:
        if t in STRESS_SET or t == JOINT:
            continue
        return t in VOWEL_SET
    return False


def interpret_document(doc: Document | str, dialect: Dialect | None = None
                       ) -> list[tuple[AnnotatedWord,
                                       IpaTranscription | None]]:
    """Interprets every word; None marks words inside \\nonl regions.

    The unstressed-"the" rule and RP linking r need the next word's first
    sound, so words are interpreted right to left.
    """
    if isinstance(doc, str):
        doc = parse_document(doc)
    words: list[tuple[AnnotatedWord, bool]] = []
    plain = False
    for item in doc.items:
        if isinstance(item, RegionToggle):
            if item.kind == "nonl":
                plain = True
            elif item.kind == "nonr":
                plain = False
        elif isinstance(item, AnnotatedWord):
            words.append((item, plain))
    out: list[tuple[AnnotatedWord, IpaTranscription | None]] = []
    next_vowel = False
    for word, passthrough in reversed(words):
        if passthrough:
            out.append((word, None))
            next_vowel = False
            continue
        result = interpret_word(word, dialect,
                                next_starts_with_vowel=next_vowel)
        out.append((word, result))
        next_vowel = _first_sound_is_vowel(result)
    out.reverse()
    return out


def document_ipa(doc: Document | str, dialect: Dialect | None = None) -> str:
    """The whole document's transcription: [word word ...]."""
    parts = [r.text for _, r in interpret_document(doc, dialect)
             if r is not None]
    return "[" + " ".join(parts) + "]"
