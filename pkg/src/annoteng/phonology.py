"""ASCII phoneme codec and sound classifications.

Transcriptions are sequences of ASCII phoneme codes written back to back,
optionally wrapped in brackets:

    [k2b@rd]  [""loUk@m"oUS@n]  [n"aU@deIz]

``"`` and ``""`` are primary and secondary stress and precede the stressed
vowel.  ``-`` joins the halves of hyphenated and contracted words.  ``\\ae``
takes an optional ``{}`` guard so a following letter is not swallowed
(D"\\ae{}t).  ``K`` is the rhotic offglide.  The codes ``8``, ``0``, ``1``
and bare ``i`` occur in imported transcriptions only and reduce to ``@`` or
``I`` under the default equivalence.
"""

from __future__ import annotations

from enum import Enum


class Dialect(Enum):
    GA = "GA"
    RP = "RP"


class IpaError(ValueError):
    pass


STRESS_PRIMARY = '"'
STRESS_SECONDARY = '""'
JOINT = "-"

CONSONANTS = (
    "p", "b", "t", "d", "g", "k", "m", "n", "N", "r", "f", "v", "T", "D",
    "s", "z", "S", "Z", "tS", "dZ", "h", "x", "j", "l", "w", "\\*w", "R",
)
VOWELS = (
    "i:", "I", "u:", "U", "eI", "@", "oU", "E", "\\ae", "2", "O:", "6",
    "A:", "aI", "OI", "aU", "O", "3", "3:", "A", "@U", "K",
    "8", "0", "1", "i",
)

VOICELESS = frozenset({"p", "t", "k", "f", "T", "s", "S", "tS", "h", "x",
                       "\\*w"})
VOWEL_SET = frozenset(VOWELS)
CONSONANT_SET = frozenset(CONSONANTS)
STRESS_SET = frozenset({STRESS_PRIMARY, STRESS_SECONDARY})

# reduced codes collapse onto core phonemes for comparison
REDUCED = {"8": "@", "0": "@", "1": "I", "i": "I"}

_ALIASES = {"*r": "r", "\\*r": "r"}
_TOKENS = sorted(
    set(CONSONANTS) | set(VOWELS) | set(_ALIASES)
    | {STRESS_PRIMARY, STRESS_SECONDARY, JOINT},
    key=len, reverse=True)


def parse_ascii_ipa(text: str) -> list[str]:
    """Splits a transcription into phoneme tokens.

    Brackets and whitespace are skipped; an optional {} after a code is
    consumed.  Raises :class:`IpaError` on anything unrecognised.
    """
    out: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in "[] \t\n":
            i += 1
            continue
        for tok in _TOKENS:
            if text.startswith(tok, i):
                out.append(_ALIASES.get(tok, tok))
                i += len(tok)
                if text[i:i + 2] == "{}":
                    i += 2
                break
        else:
            raise IpaError(f"unknown phoneme code at {text[i:i + 4]!r}")
    return out


def render_ascii_ipa(tokens: list[str] | tuple[str, ...],
                     brackets: bool = False) -> str:
    out: list[str] = []
    for k, tok in enumerate(tokens):
        if tok == "\\ae" and k + 1 < len(tokens) and tokens[k + 1][0].isalnum():
            out.append("\\ae{}")
        else:
            out.append(tok)
    body = "".join(out)
    return f"[{body}]" if brackets else body


_UNICODE = {
    STRESS_PRIMARY: "ˈ", STRESS_SECONDARY: "ˌ", JOINT: "-",
    "p": "p", "b": "b", "t": "t", "d": "d", "g": "g", "k": "k",
    "m": "m", "n": "n", "N": "ŋ", "r": "ɹ", "f": "f", "v": "v",
    "T": "θ", "D": "ð", "s": "s", "z": "z", "S": "ʃ",
    "Z": "ʒ", "tS": "tʃ", "dZ": "dʒ", "h": "h", "x": "x",
    "j": "j", "l": "l", "w": "w", "\\*w": "ʍ", "R": "ɾ",
    "i:": "iː", "I": "ɪ", "u:": "uː", "U": "ʊ",
    "eI": "eɪ", "@": "ə", "oU": "oʊ", "E": "ɛ",
    "\\ae": "æ", "2": "ʌ", "O:": "ɔː", "6": "ɒ",
    "A:": "ɑː", "aI": "aɪ", "OI": "ɔɪ",
    "aU": "aʊ", "O": "ɔ", "3": "ɜ", "3:": "ɜː",
    "A": "ɑ", "@U": "əʊ", "K": "ɚ",
    "8": "ə", "0": "ə", "1": "ɪ", "i": "i",
}


def render_unicode_ipa(text_or_tokens) -> str:
    """Renders a transcription with real IPA glyphs."""
    if isinstance(text_or_tokens, str):
        tokens = parse_ascii_ipa(text_or_tokens)
    else:
        tokens = list(text_or_tokens)
    return "".join(_UNICODE[t] for t in tokens)


def reduce_tokens(tokens: list[str]) -> list[str]:
    return [REDUCED.get(t, t) for t in tokens]


def strip_stress(tokens: list[str]) -> list[str]:
    return [t for t in tokens if t not in STRESS_SET]


def equivalent(a, b, *, reduced: bool = True,
               ignore_stress: bool = False) -> bool:
    """Compares two transcriptions (strings or token lists)."""
    ta = parse_ascii_ipa(a) if isinstance(a, str) else list(a)
    tb = parse_ascii_ipa(b) if isinstance(b, str) else list(b)
    if reduced:
        ta, tb = reduce_tokens(ta), reduce_tokens(tb)
    if ignore_stress:
        ta, tb = strip_stress(ta), strip_stress(tb)
    return ta == tb
