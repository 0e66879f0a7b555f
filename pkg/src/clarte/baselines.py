"""Classical readability formulas adapted to French token streams.

These grade-level formulas were designed for English; they serve here as
baselines only.  Syllables come from the French heuristic in
:mod:`clarte.ingest`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .documents import Document, is_word_token
from .ingest import count_syllables_fr


@dataclass(frozen=True)
class ReadabilityCounts:
    words: int
    sentences: int
    syllables: int
    polysyllables: int  # words with three or more syllables

    def __post_init__(self) -> None:
        if self.sentences <= 0:
            raise ValueError("at least one sentence required")
        if self.words <= 0:
            raise ValueError("at least one word required")
        if self.syllables < self.words:
            raise ValueError("every word has at least one syllable")
        if not 0 <= self.polysyllables <= self.words:
            raise ValueError("polysyllable count out of range")


def compute_counts(doc: Document) -> ReadabilityCounts:
    words = 0
    syllables = 0
    polysyllables = 0
    for sent in doc.sentences:
        for tok in sent.tokens:
            if not is_word_token(tok):
                continue
            words += 1
            n = count_syllables_fr(tok.form)
            syllables += n
            if n >= 3:
                polysyllables += 1
    return ReadabilityCounts(
        words=words,
        sentences=len(doc.sentences),
        syllables=syllables,
        polysyllables=polysyllables,
    )


def fkgl(counts: ReadabilityCounts) -> float:
    """Flesch-Kincaid grade level."""
    return (
        0.39 * counts.words / counts.sentences
        + 11.8 * counts.syllables / counts.words
        - 15.59
    )


def smog(counts: ReadabilityCounts) -> float:
    """SMOG grade."""
    return 1.0430 * math.sqrt(counts.polysyllables * 30.0 / counts.sentences) + 3.1291


def gunning_fog(counts: ReadabilityCounts) -> float:
    """Gunning fog index; complex words are the polysyllabic ones."""
    return 0.4 * (
        counts.words / counts.sentences
        + 100.0 * counts.polysyllables / counts.words
    )


def readability_report(doc: Document) -> dict[str, float]:
    counts = compute_counts(doc)
    return {
        "fkgl": fkgl(counts),
        "smog": smog(counts),
        "gunning_fog": gunning_fog(counts),
    }
