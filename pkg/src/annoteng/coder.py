"""Standard coding: minimum-cost annotation of a plain spelling.

Given a spelling and a target pronunciation, search the space of
annotation placements for the cheapest combination whose interpretation
equals the target.  Every candidate is verified through the full
interpreter pipeline, so nonlocal effects (stress attraction, inferred
secondary stress, digraph breaking) are handled by construction rather
than by local alignment constraints.

Cost of a coding = sum of per-command costs; ties are broken by the
signed position cost (1-based letter positions, negative for deletions)
and then by the lexicographically smallest rendered markup.
"""

from __future__ import annotations

import heapq
import itertools
import re
from dataclasses import dataclass, field

from .markup import (
    AnnKind, AnnotatedWord, Document, Gap, Mark, RegionToggle, TextRun,
    CONSONANT_MARKS, SEPARATORS, STRESS_MARKS, VOWEL_CLASSES,
    normalize_word, render_word,
)
from .phonology import (
    Dialect, JOINT, REDUCED, STRESS_SET, VOWEL_SET, equivalent,
    parse_ascii_ipa,
)
from .interpreter import (
    NoRuleForUnit, interpret_word, _CLASS_TABLE, _COLUMN, _CONS_DIGRAPHS,
    _MARKED_CONS,
)


class CodingError(Exception):
    pass


class NoCodingFound(CodingError):
    """No annotation within the budget interprets to the target."""


class AmbiguousTarget(CodingError):
    """Target uses reduced symbols without the equivalence toggle."""


class OracleBoundExceeded(CodingError):
    """Spelling too long for exhaustive enumeration."""


@dataclass(frozen=True)
class CostModel:
    """Per-command costs of the annotation cost table."""

    stress: int = 30
    silent: int = 31
    common_r: int = 10          # the non-rhotic \co{r}
    broad_single: int = 34      # brd / idp / udp
    broad_double: int = 37      # bbrd / iidp / uudp
    plain_single: int = 42      # pln / nat
    plain_double: int = 53      # nnat
    other_single: int = 44      # remaining single-form marks
    other_double: int = 55      # remaining doubled forms, doubled letters
    sep_plain: int = 65         # \se
    sep_one_sided: int = 66     # \sel / \ser
    sep_two_sided: int = 92     # \selr / \serl
    introduction: int = 200     # \w{} / \y{} / \sch{}

    def mark_cost(self, mark: Mark, letters: str) -> int:
        kind = mark.kind
        if kind in STRESS_MARKS:
            return self.stress
        if kind is AnnKind.SILENT:
            return self.silent
        span_letters = letters[mark.start:mark.start + mark.span]
        if kind is AnnKind.COMMON and span_letters.lower() == "r":
            return self.common_r
        if kind in (AnnKind.BROAD, AnnKind.I_DIPH, AnnKind.U_DIPH):
            return self.broad_double if mark.doubled else self.broad_single
        if kind in (AnnKind.PLAIN, AnnKind.NATURAL):
            return self.plain_double if mark.doubled else self.plain_single
        # a mark over a digraph (th, ch, ...) is one annotation; only a
        # doubled command form or a doubled letter (ss, ll) counts double
        same = mark.span > 1 and len(set(span_letters.lower())) == 1
        if mark.doubled or same:
            return self.other_double
        return self.other_single

    def gap_cost(self, gap: Gap) -> int:
        if gap.kind is AnnKind.SEP_PLAIN:
            return self.sep_plain
        if gap.kind in (AnnKind.SEP_LEFT, AnnKind.SEP_RIGHT):
            return self.sep_one_sided
        if gap.kind in (AnnKind.SEP_LEFT_RIGHT, AnnKind.SEP_RIGHT_LEFT):
            return self.sep_two_sided
        return self.introduction


DEFAULT_COSTS = CostModel()


@dataclass(frozen=True)
class SearchBudget:
    max_annotations: int = 5    # commands per word
    node_limit: int = 300_000   # states popped before giving up


DEFAULT_BUDGET = SearchBudget()


@dataclass(frozen=True)
class CodingResult:
    word: AnnotatedWord
    total_cost: int
    position_cost: int

    @property
    def markup(self) -> str:
        return render_word(self.word)


def _letter_position(letters: str, start: int) -> int:
    # 1-based, counting alphabetic letters of the original spelling only
    return sum(1 for ch in letters[:start] if ch.isalpha()) + 1


def annotation_cost(word: AnnotatedWord,
                    m: CostModel | None = None) -> tuple[int, int]:
    """Total command cost and signed position cost of a word's markup."""
    m = m or DEFAULT_COSTS
    total = position = 0
    for mark in word.marks:
        if mark.kind is AnnKind.GROUP:
            continue
        total += m.mark_cost(mark, word.letters)
        pos = _letter_position(word.letters, mark.start)
        position += -pos if mark.kind is AnnKind.SILENT else pos
    for gap in word.gaps:
        total += m.gap_cost(gap)
    return total, position


# ---------------------------------------------------------------------------
# move vocabulary

_VOWELISH = frozenset("aeiouy")
_CLASS_LETTERS = frozenset("aeiouyw")
_DOUBLED_CLASSES = (AnnKind.NATURAL, AnnKind.BROAD, AnnKind.CLEAR,
                    AnnKind.OPAQUE, AnnKind.I_DIPH, AnnKind.U_DIPH)
_GA_SURFACE = {"K": "r", "3:": "3", "6": "A", "A:": "A"}

_WORD_RE = re.compile(r"[A-Za-z]+(?:['\-][A-Za-z]+)*")


@dataclass(frozen=True)
class _Move:
    item: Mark | Gap
    cost: int
    position: int


def _satisfiable(tokens, avail: frozenset[str] | None,
                 dialect: Dialect | None) -> bool:
    # True when every sound the rule row emits can occur in the target
    if avail is None:
        return True
    for t in tokens:
        if t == "(j)":
            continue
        if dialect is Dialect.GA:
            t = _GA_SURFACE.get(t, t)
        elif dialect is Dialect.RP:
            if t == "r":
                continue
            t = {"K": "@", "oU": "@U"}.get(t, t)
        if t in avail:
            continue
        if t == "t" and "tS" in avail:       # affricate absorption
            continue
        if t == "d" and "dZ" in avail:
            continue
        return False
    return True


def _cell_ok(kind: AnnKind, ch: str, avail, dialect) -> bool:
    cell = _CLASS_TABLE[kind].get(_COLUMN.get(ch, ""))
    if cell is None:
        return False
    value, rhotic = cell
    return (_satisfiable(value, avail, dialect)
            or _satisfiable(rhotic or value, avail, dialect))


def _strands_consonants(low: str, b: int) -> bool:
    # a separator must leave a vowel letter on both sides of its own
    # alphabetic run
    lo = b
    while lo > 0 and low[lo - 1].isalpha():
        lo -= 1
    hi = b
    while hi < len(low) and low[hi].isalpha():
        hi += 1
    return not (set(low[lo:b]) & _VOWELISH and set(low[b:hi]) & _VOWELISH)


def _moves(letters: str, avail: frozenset[str] | None,
           dialect: Dialect | None, m: CostModel) -> list[_Move]:
    low = letters.lower()
    n = len(letters)
    alpha = [ch.isalpha() for ch in letters]
    marks: list[Mark] = []
    gaps: list[Gap] = []

    for i in range(n):
        if not alpha[i]:
            continue
        for span in (1, 2, 3):
            if i + span > n or not all(alpha[i:i + span]):
                break
            marks.append(Mark(AnnKind.SILENT, i, span))
        if low[i] in _VOWELISH:
            marks.append(Mark(AnnKind.STRESS_PRIMARY, i, 1))
            marks.append(Mark(AnnKind.STRESS_SECONDARY, i, 1))
        if low[i] in _CLASS_LETTERS:
            for kind in VOWEL_CLASSES:
                if _cell_ok(kind, low[i], avail, dialect):
                    marks.append(Mark(kind, i, 1))
        if (i + 1 < n and low[i] in _CLASS_LETTERS
                and low[i + 1] in _CLASS_LETTERS):
            for kind in _DOUBLED_CLASSES:
                if (_cell_ok(kind, low[i], avail, dialect)
                        or _cell_ok(kind, low[i + 1], avail, dialect)):
                    marks.append(Mark(kind, i, 2, doubled=True))

    for (kind, key), sound in _MARKED_CONS.items():
        if not _satisfiable(sound, avail, dialect):
            continue
        start = low.find(key)
        while start != -1:
            marks.append(Mark(kind, start, len(key)))
            start = low.find(key, start + 1)
    for i in range(n):
        if low[i] in "aeiouy" and _satisfiable(("w",), avail, dialect):
            marks.append(Mark(AnnKind.SEMI_W, i, 1))
    if _satisfiable(("j",), avail, dialect):
        for i in range(n):
            if low[i] in "iyjl":
                marks.append(Mark(AnnKind.SEMI_Y, i, 1))
            if low[i:i + 2] == "ll":
                marks.append(Mark(AnnKind.SEMI_Y, i, 2))

    for b in range(1, n):
        if alpha[b - 1] and alpha[b] and not _strands_consonants(low, b):
            for kind in (AnnKind.SEP_PLAIN, AnnKind.SEP_LEFT,
                         AnnKind.SEP_RIGHT, AnnKind.SEP_LEFT_RIGHT,
                         AnnKind.SEP_RIGHT_LEFT):
                gaps.append(Gap(b, kind))
    for b in range(n + 1):
        for kind, tok in ((AnnKind.SEMI_W, "w"), (AnnKind.SEMI_Y, "j"),
                          (AnnKind.SCHWA_INSERT, "@")):
            if _satisfiable((tok,), avail, dialect):
                gaps.append(Gap(b, kind))

    out = [_Move(mk, m.mark_cost(mk, letters),
                 (-1 if mk.kind is AnnKind.SILENT else 1)
                 * _letter_position(letters, mk.start))
           for mk in marks]
    out.extend(_Move(g, m.gap_cost(g), 0) for g in gaps)
    out.sort(key=lambda mv: (mv.cost, mv.position, str(mv.item)))
    return out


def _compatible(a: Mark | Gap, b: Mark | Gap) -> bool:
    if isinstance(a, Gap) and isinstance(b, Gap):
        return a.index != b.index
    if isinstance(a, Gap):
        a, b = b, a
    if isinstance(b, Gap):
        return not (a.start < b.index < a.start + a.span)
    lo = max(a.start, b.start)
    hi = min(a.start + a.span, b.start + b.span)
    if lo >= hi:
        return True
    # a stress mark may sit on a letter of a vowel-class span
    stress, other = (a, b) if a.kind in STRESS_MARKS else (b, a)
    return (stress.kind in STRESS_MARKS and other.kind in VOWEL_CLASSES
            and other.start <= stress.start < other.start + other.span)


def _build(letters: str, chosen: tuple[_Move, ...]) -> AnnotatedWord:
    marks = tuple(mv.item for mv in chosen if isinstance(mv.item, Mark))
    gaps = tuple(sorted((mv.item for mv in chosen
                         if isinstance(mv.item, Gap)),
                        key=lambda g: g.index))
    return normalize_word(AnnotatedWord(letters, marks, gaps))


# ---------------------------------------------------------------------------
# coding

def _target_tokens(target) -> list[str]:
    if isinstance(target, str):
        return parse_ascii_ipa(target)
    if hasattr(target, "tokens"):
        return list(target.tokens)
    return list(target)


def _check_target(tokens: list[str], reduced_ok: bool) -> None:
    if not tokens:
        raise ValueError("empty target pronunciation")
    bad = sorted(set(tokens) & set(REDUCED))
    if bad and not reduced_ok:
        raise AmbiguousTarget(
            "target uses reduced symbols %s; pass reduced_ok=True to code "
            "against their full equivalents" % ", ".join(bad))


def _matcher(tokens: list[str], reduced_ok: bool):
    exact = any(t in STRESS_SET for t in tokens)

    def match(got) -> bool:
        return equivalent(list(got), tokens, reduced=reduced_ok,
                          ignore_stress=not exact)

    return match


def _try_interpret(word: AnnotatedWord, dialect):
    try:
        return interpret_word(word, dialect).tokens
    except NoRuleForUnit:
        return None


def code_word(spelling: str, target, m: CostModel | None = None,
              b: SearchBudget | None = None,
              dialect: Dialect | None = None, *,
              reduced_ok: bool = False) -> CodingResult:
    """Finds the cheapest annotation of `spelling` that reads as `target`.

    Raises NoCodingFound when the budget is exhausted or the target is
    unreachable; AmbiguousTarget when the target contains reduced vowel
    symbols and `reduced_ok` is left off.
    """
    if not _WORD_RE.fullmatch(spelling):
        raise ValueError(f"not a codable word: {spelling!r}")
    m = m or DEFAULT_COSTS
    b = b or DEFAULT_BUDGET
    tokens = _target_tokens(target)
    _check_target(tokens, reduced_ok)
    match = _matcher(tokens, reduced_ok)
    avail = frozenset(tokens) - STRESS_SET
    try:
        return _search(spelling, _moves(spelling, avail, dialect, m),
                       match, b, dialect, tokens)
    except NoCodingFound:
        # the relevance filter is heuristic; retry with every move
        return _search(spelling, _moves(spelling, None, dialect, m),
                       match, b, dialect, tokens)


_BREAKING_SEPS = frozenset({
    AnnKind.SEP_LEFT, AnnKind.SEP_RIGHT,
    AnnKind.SEP_LEFT_RIGHT, AnnKind.SEP_RIGHT_LEFT,
})


def _floor_shifts(item: Mark | Gap, letters: str) -> bool:
    # moves that can only relax the bounds are not worth re-checking
    if isinstance(item, Gap):
        return item.kind in _BREAKING_SEPS or "'" in letters
    return item.kind not in VOWEL_CLASSES or "'" in letters


def _vowel_need(tokens: list[str]) -> int:
    """Minimum sounding vowel units behind a token sequence.

    A unit contributes at most two adjacent vowel tokens (nucleus plus
    rhotic offglide), so each maximal vowel run of length L needs at
    least ceil(L / 2) units.
    """
    need = run = 0
    for t in tokens:
        if t in VOWEL_SET:
            run += 1
        else:
            need += (run + 1) // 2
            run = 0
    return need + (run + 1) // 2


def _stress_floor(letters: str, items) -> tuple[int, int, int]:
    """(primary floor, secondary floor, vowel carriers left).

    Mirrors the interpreter's stress-domain rules: \\se joins domains,
    the one-sided separators and intrinsic joints break them, annotated
    stress always sounds, and an unmuted a/i/o/u guarantees the default
    stress of a P or S level domain.  Stress bounds err low, the carrier
    count errs high, so neither can prune a feasible coding.
    """
    low = letters.lower()
    muted: set[int] = set()
    silenced: set[int] = set()
    gap_at: set[int] = set()
    st: list[int] = []
    stst: list[int] = []
    cuts: list[tuple[int, AnnKind | None]] = []
    for it in items:
        if isinstance(it, Gap):
            gap_at.add(it.index)
            if it.kind in _BREAKING_SEPS:
                cuts.append((it.index, it.kind))
            continue
        if it.kind is AnnKind.STRESS_PRIMARY:
            st.append(it.start)
        elif it.kind is AnnKind.STRESS_SECONDARY:
            stst.append(it.start)
        elif it.kind is AnnKind.SILENT:
            muted.update(range(it.start, it.start + it.span))
            silenced.update(range(it.start, it.start + it.span))
        elif it.kind in CONSONANT_MARKS:
            muted.update(range(it.start, it.start + it.span))
    for i, ch in enumerate(letters):
        if ch == "-":
            cuts.append((i, None))
        elif ch == "'":
            # 're contraction keeps one domain unless the r is removed
            if not (i + 1 < len(letters) and low[i + 1] == "r"
                    and i + 1 not in silenced and i + 1 not in gap_at):
                cuts.append((i, None))
    cuts.sort(key=lambda c: c[0])

    spans = []
    prev = 0
    for pos, _ in cuts:
        spans.append((prev, pos))
        prev = pos
    spans.append((prev, len(letters)))
    levels = ["P"] + ["U"] * len(cuts)
    for d, (_, lead) in enumerate(cuts, start=1):
        if lead is AnnKind.SEP_LEFT:
            levels[d - 1], levels[d] = "P", "U"
        elif lead is AnnKind.SEP_RIGHT:
            levels[d - 1], levels[d] = "U", "P"
        elif lead is AnnKind.SEP_LEFT_RIGHT:
            levels[d - 1], levels[d] = "P", "S"
        elif lead is AnnKind.SEP_RIGHT_LEFT:
            levels[d - 1], levels[d] = "S", "P"

    prim = sec = 0
    for (lo, hi), level in zip(spans, levels):
        n_st = sum(1 for p in st if lo <= p < hi)
        n_stst = sum(1 for p in stst if lo <= p < hi)
        sure = any(
            i not in muted
            and (low[i] in "aio"
                 or (low[i] == "u" and (i == 0 or low[i - 1] not in "qg")))
            for i in range(lo, hi))
        prim += n_st
        sec += n_stst
        if sure and not n_st:
            if level == "P":
                prim += 1
            elif level == "S" and not n_stst:
                sec += 1
    carriers = sum(1 for i, ch in enumerate(low)
                   if ch in "aeiouwy" and i not in muted)
    carriers += sum(1 for it in items
                    if isinstance(it, Gap)
                    and it.kind is AnnKind.SCHWA_INSERT)
    return prim, sec, carriers


_SEMIS = frozenset({AnnKind.SEMI_W, AnnKind.SEMI_Y})
_FREE_CONS = frozenset({"w", "j", "r"})  # insertions and rhotic offglides

_PLAIN_CONS: dict[str, tuple[str, ...]] = {
    "b": ("b",), "c": ("k", "s"), "d": ("d",), "f": ("f",),
    "g": ("g", "dZ"), "h": ("h",), "j": ("dZ",), "k": ("k",),
    "l": ("l",), "m": ("m",), "n": ("n", "N"), "p": ("p",), "q": ("k",),
    "r": ("r",), "s": ("s", "z"), "t": ("t", "T", "D"), "v": ("v",),
    "w": ("w",), "y": ("j",), "z": ("z",),
}


def _letter_sounds():
    """Every consonant a letter can head under any annotation or digraph."""
    one: dict[str, frozenset[str]] = {}
    two: dict[str, frozenset[tuple[str, ...]]] = {}
    singles: dict[str, set[str]] = {}
    pairs: dict[str, set[tuple[str, ...]]] = {}
    for letter, toks in _PLAIN_CONS.items():
        singles.setdefault(letter, set()).update(toks)
    for key, toks, _ in _CONS_DIGRAPHS:
        if toks:
            singles.setdefault(key[0], set()).add(toks[0])
    for (_, key), toks in _MARKED_CONS.items():
        if len(toks) == 1:
            singles.setdefault(key[0], set()).add(toks[0])
        else:
            pairs.setdefault(key[0], set()).add(toks)
    pairs.setdefault("x", set()).update({("k", "s"), ("g", "z")})
    one.update((k, frozenset(v)) for k, v in singles.items())
    two.update((k, frozenset(v)) for k, v in pairs.items())
    return one, two


_CAND1, _CAND2 = _letter_sounds()


def _required_cons(tokens: list[str]) -> list[str]:
    # consonants the letters themselves must supply, in order; w, j and
    # r can come from insertions or rhotic offglides, so never required
    return [t for t in tokens
            if t not in VOWEL_SET and t not in STRESS_SET
            and t not in _FREE_CONS and t != JOINT and t != "(j)"]


def _cons_feasible(low: str, items, req: list[str]) -> bool:
    """Can the letters still emit every required consonant, in order?

    Letters may always end up silent, so this embeds the required
    sequence into per-letter options: a chosen mark pins its span to the
    marked value, everything else keeps the full candidate sets.
    """
    fixed: dict[int, tuple[str, ...]] = {}
    for it in items:
        if isinstance(it, Gap) or it.kind in STRESS_MARKS:
            continue
        if it.kind in CONSONANT_MARKS and it.kind not in _SEMIS:
            val = _MARKED_CONS.get((it.kind, low[it.start:it.start + it.span]))
            fixed[it.start] = val or ()
            tail = it.start + 1
        else:
            tail = it.start
        for i in range(tail, it.start + it.span):
            fixed[i] = ()
    m = len(req)
    done = 1 << m
    reach = 1
    for i, ch in enumerate(low):
        if i in fixed:
            val = fixed[i]
            singles: frozenset[str] | tuple = val if len(val) == 1 else ()
            pairs: frozenset | tuple = (val,) if len(val) == 2 else ()
        elif ch.isalpha():
            singles = _CAND1.get(ch, ())
            pairs = _CAND2.get(ch, ())
        else:
            continue
        add = 0
        mask, j = reach, 0
        while mask:
            if mask & 1:
                if j < m and req[j] in singles:
                    add |= 2 << j
                if j + 1 < m and pairs and (req[j], req[j + 1]) in pairs:
                    add |= 4 << j
            mask >>= 1
            j += 1
        reach |= add
        if reach & done:
            return True
    return bool(reach & done)


def _search(spelling: str, moves: list[_Move], match, b: SearchBudget,
            dialect: Dialect | None, tokens: list[str]) -> CodingResult:
    n_alpha = sum(1 for ch in spelling if ch.isalpha())
    sensitive = any(t in STRESS_SET for t in tokens)
    max_prim = tokens.count('"') if sensitive else len(spelling)
    max_sec = tokens.count('""') if sensitive else len(spelling)
    need = _vowel_need(tokens)
    low = spelling.lower()
    req = _required_cons(tokens)
    req_set = set(req)
    watched = [bool(req_set & _CAND1.get(ch, frozenset())
                    or any(t in req_set
                           for pr in _CAND2.get(ch, ()) for t in pr))
               for ch in low]
    if req and not _cons_feasible(low, (), req):
        raise NoCodingFound(
            f"letters of {spelling!r} cannot yield the target consonants")
    heap: list[tuple] = [(0, 0, 0, -1, ())]
    seq = itertools.count(1)
    best_key = None
    best: list[AnnotatedWord] = []
    pops = 0
    while heap:
        total, pos, _, last, chosen = heapq.heappop(heap)
        if best_key is not None and (total, pos) != best_key:
            break
        pops += 1
        if pops > b.node_limit:
            raise NoCodingFound(
                f"no coding for {spelling!r} within {b.node_limit} states")
        word = _build(spelling, chosen)
        got = _try_interpret(word, dialect)
        if got is not None and match(got):
            best_key = (total, pos)
            best.append(word)
            continue
        if best_key is not None or len(chosen) >= b.max_annotations:
            continue
        deleted = sum(mv.item.span for mv in chosen
                      if isinstance(mv.item, Mark)
                      and mv.item.kind is AnnKind.SILENT)
        items = [c.item for c in chosen]
        for idx in range(last + 1, len(moves)):
            mv = moves[idx]
            if not all(_compatible(mv.item, c.item) for c in chosen):
                continue
            if (isinstance(mv.item, Mark)
                    and mv.item.kind is AnnKind.SILENT
                    and deleted + mv.item.span >= n_alpha):
                continue
            if _floor_shifts(mv.item, spelling):
                lo_p, lo_s, have = _stress_floor(spelling, items + [mv.item])
                if lo_p > max_prim or lo_s > max_sec or have < need:
                    continue
            heapq.heappush(heap, (total + mv.cost, pos + mv.position,
                                  next(seq), idx, chosen + (mv,)))
    if not best:
        raise NoCodingFound(f"no coding reaches the target for {spelling!r}")
    word = min(best, key=render_word)
    return CodingResult(word, *best_key)


def enumerate_codings(spelling: str, target, max_annotations: int,
                      dialect: Dialect | None = None, *,
                      reduced_ok: bool = False,
                      max_letters: int = 8) -> list[CodingResult]:
    """Exhaustively lists every coding with at most `max_annotations`
    commands, round-trip verified.  Brute-force oracle for minimality
    tests; spelling length is capped."""
    if sum(1 for ch in spelling if ch.isalpha()) > max_letters:
        raise OracleBoundExceeded(
            f"{spelling!r} exceeds the {max_letters}-letter oracle bound")
    tokens = _target_tokens(target)
    _check_target(tokens, reduced_ok)
    match = _matcher(tokens, reduced_ok)
    moves = _moves(spelling, None, dialect, DEFAULT_COSTS)
    n_alpha = sum(1 for ch in spelling if ch.isalpha())
    out: list[CodingResult] = []
    for k in range(max_annotations + 1):
        for combo in itertools.combinations(moves, k):
            if any(not _compatible(a.item, c.item)
                   for a, c in itertools.combinations(combo, 2)):
                continue
            if sum(mv.item.span for mv in combo if isinstance(mv.item, Mark)
                   and mv.item.kind is AnnKind.SILENT) >= n_alpha:
                continue
            word = _build(spelling, combo)
            got = _try_interpret(word, dialect)
            if got is not None and match(got):
                total = sum(mv.cost for mv in combo)
                pos = sum(mv.position for mv in combo)
                out.append(CodingResult(word, total, pos))
    out.sort(key=lambda r: (r.total_cost, r.position_cost, r.markup))
    return out


# ---------------------------------------------------------------------------
# documents

def code_document(plain: str, lex, m: CostModel | None = None,
                  b: SearchBudget | None = None,
                  dialect: Dialect | None = None
                  ) -> tuple[Document, list[dict]]:
    """Annotates every word of a plain text from its lexicon pronunciation.

    Words with no (or several) pronunciations, and words the coder cannot
    reach, are wrapped in \\nonl{}...\\nonr{} and reported; the report has
    one record per word: {surface, status, cost, markup} with status one
    of ok / missing / ambiguous / no_coding.
    """
    items: list = []
    report: list[dict] = []
    pos = 0
    for hit in _WORD_RE.finditer(plain):
        if hit.start() > pos:
            items.append(TextRun(plain[pos:hit.start()]))
        pos = hit.end()
        surface = hit.group()
        prons = lex.pronunciations(surface, dialect=dialect)
        status, cost, rendered, word = "ok", None, surface, None
        if not prons:
            status = "missing"
        elif len(prons) > 1:
            status = "ambiguous"
        else:
            try:
                result = code_word(surface, prons[0], m, b, dialect)
                cost, word = result.total_cost, result.word
                rendered = result.markup
            except CodingError:
                status = "no_coding"
        if word is None:
            items.extend((RegionToggle("nonl"), AnnotatedWord(surface),
                          RegionToggle("nonr")))
        else:
            items.append(word)
        report.append({"surface": surface, "status": status,
                       "cost": cost, "markup": rendered})
    if pos < len(plain):
        items.append(TextRun(plain[pos:]))
    return Document(tuple(items)), report
