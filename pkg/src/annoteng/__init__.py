"""Annotated English: diacritics that pin down English pronunciation.

Two directions:

- interpret: annotated text -> ASCII-IPA transcription
  (:func:`interpret_word`, :func:`interpret_document`)
- code: plain spelling + target pronunciation -> cheapest annotation
  (:func:`code_word`, :func:`code_document`)
"""

from .markup import (
    AnnKind, AnnotatedWord, ArityError, Document, Gap, IllegalDoubleForm,
    Mark, MarkupError, RegionToggle, TextRun, UnbalancedBraces,
    UnknownCommand, Violation, normalize, normalize_word, parse_document,
    parse_word, render_document, render_word, validate,
)
from .phonology import (
    CONSONANTS, VOWELS, Dialect, IpaError, equivalent, parse_ascii_ipa,
    render_ascii_ipa, render_unicode_ipa, strip_stress,
)
from .interpreter import (
    IpaTranscription, NoRuleForUnit, PipelineTrace, document_ipa,
    interpret_document, interpret_word,
)
from .coder import (
    AmbiguousTarget, CodingError, CodingResult, CostModel, DEFAULT_BUDGET,
    DEFAULT_COSTS, NoCodingFound, OracleBoundExceeded, SearchBudget,
    annotation_cost, code_document, code_word, enumerate_codings,
)
from .lexicon import (
    EmptyLexicon, Lexicon, LexiconEntry, LexiconError, load_lexicon,
    save_lexicon,
)
from .lexicon import ParseError as LexiconParseError
from .cli import Stats, compute_stats

__version__ = "0.1.0"

__all__ = [
    "AnnKind", "AnnotatedWord", "ArityError", "Document", "Gap",
    "IllegalDoubleForm", "Mark", "MarkupError", "RegionToggle", "TextRun",
    "UnbalancedBraces", "UnknownCommand", "Violation", "normalize",
    "normalize_word", "parse_document", "parse_word", "render_document",
    "render_word", "validate",
    "CONSONANTS", "VOWELS", "Dialect", "IpaError", "equivalent",
    "parse_ascii_ipa", "render_ascii_ipa", "render_unicode_ipa",
    "strip_stress",
    "IpaTranscription", "NoRuleForUnit", "PipelineTrace", "document_ipa",
    "interpret_document", "interpret_word",
    "AmbiguousTarget", "CodingError", "CodingResult", "CostModel",
    "DEFAULT_BUDGET", "DEFAULT_COSTS", "NoCodingFound",
    "OracleBoundExceeded", "SearchBudget", "annotation_cost",
    "code_document", "code_word", "enumerate_codings",
    "EmptyLexicon", "Lexicon", "LexiconEntry", "LexiconError",
    "LexiconParseError", "load_lexicon", "save_lexicon",
    "Stats", "compute_stats",
    "__version__",
]
