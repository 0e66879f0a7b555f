"""Graded word-difficulty and connectives lexicons.

Both are plain TSV files with a mandatory header row.  Graded lexicons map
a lemma to the lowest level (school grade or CEFR band mapped to 1..6) at
which it is attested; connectives carry a grammatical category and a
complexity class.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, TextIO


class LexiconFormatError(ValueError):
    """Malformed lexicon file (message carries the line number)."""


CONNECTIVE_CATEGORIES = ("conjunction", "adverbial", "other")
COMPLEXITY_CLASSES = ("simple", "complex")


@dataclass(frozen=True)
class GradedLexicon:
    """lemma -> minimum attested difficulty level in [1, n_levels]."""

    entries: dict[str, int]
    n_levels: int = 6
    source_name: str = ""

    def __post_init__(self) -> None:
        for lemma, level in self.entries.items():
            if not lemma or lemma != lemma.lower():
                raise ValueError(f"lemma {lemma!r} must be non-empty and lowercase")
            if not 1 <= level <= self.n_levels:
                raise ValueError(
                    f"level {level} for {lemma!r} outside [1, {self.n_levels}]"
                )


@dataclass(frozen=True)
class ConnectiveEntry:
    category: str  # conjunction | adverbial | other
    complexity_class: str  # simple | complex


@dataclass(frozen=True)
class ConnectivesLexicon:
    """connective (possibly multiword, space-joined, lowercase) -> entry."""

    entries: dict[str, ConnectiveEntry]
    max_tokens: int = field(init=False, default=1)

    def __post_init__(self) -> None:
        longest = 1
        for conn, entry in self.entries.items():
            if not conn or conn != conn.lower():
                raise ValueError(f"connective {conn!r} must be non-empty and lowercase")
            if entry.category not in CONNECTIVE_CATEGORIES:
                raise ValueError(f"bad category {entry.category!r} for {conn!r}")
            if entry.complexity_class not in COMPLEXITY_CLASSES:
                raise ValueError(f"bad complexity {entry.complexity_class!r} for {conn!r}")
            longest = max(longest, len(conn.split(" ")))
        object.__setattr__(self, "max_tokens", longest)


def word_level(lex: GradedLexicon, lemma: str) -> int:
    """Attested difficulty level; out-of-vocabulary lemmas get n_levels + 1."""
    if not lemma:
        raise ValueError("empty lemma")
    return lex.entries.get(lemma.lower(), lex.n_levels + 1)


def _open_lines(path_or_stream: str | Path | TextIO) -> Iterable[str]:
    if isinstance(path_or_stream, (str, Path)):
        with open(path_or_stream, encoding="utf-8") as f:
            yield from f
    else:
        yield from path_or_stream


def load_graded_lexicon(
    path: str | Path | TextIO, n_levels: int = 6, source_name: str = ""
) -> GradedLexicon:
    """Load a "lemma\\tlevel" TSV; duplicate lemmas keep the minimum level."""
    lines = iter(_open_lines(path))
    try:
        header = next(lines).rstrip("\n")
    except StopIteration:
        raise LexiconFormatError("empty lexicon file: missing header") from None
    if header.split("\t")[:2] != ["lemma", "level"]:
        raise LexiconFormatError(f"bad header {header!r}: expected 'lemma\\tlevel'")
    entries: dict[str, int] = {}
    for lineno, raw in enumerate(lines, start=2):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise LexiconFormatError(f"line {lineno}: expected 2 columns, got {len(parts)}")
        lemma = parts[0].strip().lower()
        try:
            level = int(parts[1])
        except ValueError:
            raise LexiconFormatError(
                f"line {lineno}: non-integer level {parts[1]!r}"
            ) from None
        if not 1 <= level <= n_levels:
            raise LexiconFormatError(
                f"line {lineno}: level {level} outside [1, {n_levels}]"
            )
        if not lemma:
            raise LexiconFormatError(f"line {lineno}: empty lemma")
        entries[lemma] = min(level, entries.get(lemma, level))
    name = source_name or (str(path) if isinstance(path, (str, Path)) else "")
    return GradedLexicon(entries, n_levels, name)


def load_connectives(path: str | Path | TextIO) -> ConnectivesLexicon:
    """Load a "connective\\tcategory\\tcomplexity" TSV."""
    lines = iter(_open_lines(path))
    try:
        header = next(lines).rstrip("\n")
    except StopIteration:
        raise LexiconFormatError("empty lexicon file: missing header") from None
    if header.split("\t")[:3] != ["connective", "category", "complexity"]:
        raise LexiconFormatError(
            f"bad header {header!r}: expected 'connective\\tcategory\\tcomplexity'"
        )
    entries: dict[str, ConnectiveEntry] = {}
    for lineno, raw in enumerate(lines, start=2):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise LexiconFormatError(f"line {lineno}: expected 3 columns, got {len(parts)}")
        conn = " ".join(parts[0].strip().lower().split())
        category = parts[1].strip()
        complexity = parts[2].strip()
        if category not in CONNECTIVE_CATEGORIES:
            raise LexiconFormatError(
                f"line {lineno}: category {category!r} not in {CONNECTIVE_CATEGORIES}"
            )
        if complexity not in COMPLEXITY_CLASSES:
            raise LexiconFormatError(
                f"line {lineno}: complexity {complexity!r} not in {COMPLEXITY_CLASSES}"
            )
        if not conn:
            raise LexiconFormatError(f"line {lineno}: empty connective")
        entries[conn] = ConnectiveEntry(category, complexity)
    return ConnectivesLexicon(entries)


def dumps_graded(lex: GradedLexicon) -> str:
    buf = io.StringIO()
    buf.write("lemma\tlevel\n")
    for lemma in sorted(lex.entries):
        buf.write(f"{lemma}\t{lex.entries[lemma]}\n")
    return buf.getvalue()


def default_graded_lexicon() -> GradedLexicon:
    """The graded lexicon shipped with the package."""
    text = resources.files("clarte").joinpath("data/graded_fr.tsv").read_text("utf-8")
    return load_graded_lexicon(io.StringIO(text), source_name="graded_fr")


def default_connectives() -> ConnectivesLexicon:
    """The connectives lexicon shipped with the package."""
    text = resources.files("clarte").joinpath("data/connectives_fr.tsv").read_text("utf-8")
    return load_connectives(io.StringIO(text))
