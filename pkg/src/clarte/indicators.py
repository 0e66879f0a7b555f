"""The 28 linguistic indicators: lexical, length, syntactic, structure.

Every ``_rate`` feature is reported as occurrences per 100 word tokens so
that values are comparable across texts of different lengths; length
features are raw averages.  The catalog order is a compatibility contract
for TSV/JSON output and trained models.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .documents import Document, Sentence, Token, dependency_height, is_word_token
from .lexicons import ConnectivesLexicon, GradedLexicon, word_level

FEATURE_NAMES: tuple[str, ...] = (
    # lexical (5)
    "lexical_difficulty",
    "abbreviation_rate",
    "acronym_rate",
    "named_entity_rate",
    "numeric_expression_rate",
    # length (3)
    "words_per_sentence",
    "mean_dependency_tree_height",
    "mean_constituency_tree_height",
    # syntactic (17)
    "coordinate_clause_rate",
    "relative_clause_rate",
    "adverbial_clause_rate",
    "participle_clause_rate",
    "cleft_rate",
    "interpolated_clause_rate",
    "apposition_rate",
    "enumeration_rate",
    "nonfinite_clause_rate",
    "passive_rate",
    "complex_tense_rate",
    "conditional_mood_rate",
    "negation_rate",
    "complex_np_rate",
    "bracketed_span_rate",
    "completive_clause_rate",
    "inversion_rate",
    # structure (3)
    "connective_rate",
    "complex_connective_rate",
    "temporal_break_rate",
)

N_FEATURES = len(FEATURE_NAMES)

CONTENT_POS = frozenset({"NOUN", "VERB", "ADJ", "ADV"})

RELATIVE_PRONOUN_LEMMAS = frozenset({
    "qui", "que", "dont", "où", "lequel", "laquelle", "lesquels",
    "lesquelles", "quoi",
})

# Forms counted as abbreviations even without a trailing period.
ABBREVIATION_FORMS = frozenset({
    "m.", "mme", "mme.", "mlle", "mlle.", "dr", "dr.", "me", "etc.",
    "cf.", "ex.", "art.", "chap.", "vol.", "no.", "p.",
})

NEGATION_LEMMAS = frozenset({"ne", "pas", "jamais", "rien", "personne"})

_DASH_FORMS = frozenset({"-", "–", "—"})


@dataclass(frozen=True)
class FeatureVector:
    """The 28 indicator values for one document, in catalog order."""

    values: tuple[float, ...]
    warnings: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if len(self.values) != N_FEATURES:
            raise ValueError(f"expected {N_FEATURES} values, got {len(self.values)}")
        for name, v in zip(FEATURE_NAMES, self.values):
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"feature {name} has invalid value {v!r}")

    def as_dict(self) -> dict[str, float]:
        return dict(zip(FEATURE_NAMES, self.values))

    def __getitem__(self, name: str) -> float:
        return self.values[FEATURE_NAMES.index(name)]


def _rate(count: float, words: int) -> float:
    return 100.0 * count / words if words > 0 else 0.0


# ---------------------------------------------------------------------------
# Lexical indicators
# ---------------------------------------------------------------------------

def extract_lexical(
    doc: Document, graded: GradedLexicon | Sequence[GradedLexicon]
) -> tuple[tuple[float, float, float, float, float], list[str]]:
    """lexical_difficulty, abbreviation/acronym/named-entity/numeric rates.

    ``graded`` may be one lexicon or several; with several, a word's level
    is the mean of its per-lexicon levels (paper sources use two graded
    resources without stating a combination rule).
    """
    lexicons = [graded] if isinstance(graded, GradedLexicon) else list(graded)
    if not lexicons:
        raise ValueError("at least one graded lexicon required")
    warnings: list[str] = []
    words = doc.word_count()
    if words == 0:
        warnings.append("document has no word tokens; rates reported as 0")

    levels: list[float] = []
    abbreviations = 0
    acronyms = 0
    entities = 0
    numerics = 0
    for sent in doc.sentences:
        in_propn_run = False
        for tok in sent.tokens:
            if tok.upos in CONTENT_POS:
                levels.append(
                    sum(word_level(lex, tok.lemma) for lex in lexicons) / len(lexicons)
                )
            form = tok.form
            low = form.lower()
            if any(c.isalpha() for c in form) and (
                low in ABBREVIATION_FORMS
                or (form.endswith(".") and len(form) <= 4)
            ):
                abbreviations += 1
            if len(form) >= 2 and form.isalpha() and form.isupper():
                acronyms += 1
            if tok.upos == "PROPN":
                if not in_propn_run:
                    entities += 1
                in_propn_run = True
            else:
                in_propn_run = False
            if tok.upos == "NUM" or any(c.isdigit() for c in form):
                numerics += 1
    if levels:
        difficulty = sum(levels) / len(levels)
    else:
        difficulty = sum(lex.n_levels + 1 for lex in lexicons) / len(lexicons)
        warnings.append(
            "document has no content words; lexical_difficulty set to the OOV level"
        )
    return (
        (
            difficulty,
            _rate(abbreviations, words),
            _rate(acronyms, words),
            _rate(entities, words),
            _rate(numerics, words),
        ),
        warnings,
    )


# ---------------------------------------------------------------------------
# Length indicators
# ---------------------------------------------------------------------------

def extract_length(doc: Document) -> tuple[tuple[float, float, float], list[str]]:
    """Mean tokens per sentence, mean dependency height, mean constituency
    height (leaf = 0).  Sentences without usable heads or without trees are
    skipped for the respective mean; if none qualify the mean is 0 and a
    warning is recorded."""
    warnings: list[str] = []
    n_sentences = len(doc.sentences)
    tokens_per_sentence = sum(len(s.tokens) for s in doc.sentences) / n_sentences

    dep_heights = [dependency_height(s) for s in doc.sentences if s.has_heads]
    if dep_heights:
        mean_dep = sum(dep_heights) / len(dep_heights)
    else:
        mean_dep = 0.0
        warnings.append("no sentences with dependency heads; S2 reported as 0")

    const_heights = [
        s.const_tree.height() for s in doc.sentences if s.const_tree is not None
    ]
    if const_heights:
        mean_const = sum(const_heights) / len(const_heights)
    else:
        mean_const = 0.0
        warnings.append("no constituency trees; S3 reported as 0")
    return (tokens_per_sentence, float(mean_dep), float(mean_const)), warnings


# ---------------------------------------------------------------------------
# Syntactic indicators
# ---------------------------------------------------------------------------

def _children(sent: Sentence) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {}
    for i, tok in enumerate(sent.tokens):
        if tok.head is not None:
            out.setdefault(tok.head, []).append(i)
    return out


def _is_relative_pronoun(tok: Token) -> bool:
    if tok.morph.get("PronType") == "Rel":
        return True
    return tok.upos == "PRON" and tok.lemma.lower() in RELATIVE_PRONOUN_LEMMAS


def _is_finite(tok: Token) -> bool:
    return tok.morph.get("VerbForm") == "Fin"


def _tense_auxiliaries(sent: Sentence, children: dict[int, list[int]], i: int) -> list[Token]:
    """aux dependents of token i, passive auxiliaries excluded."""
    return [
        sent.tokens[c]
        for c in children.get(i, [])
        if sent.tokens[c].base_deprel == "aux"
        and sent.tokens[c].deprel != "aux:pass"
    ]


def _is_complex_tense(sent: Sentence, children: dict[int, list[int]], i: int) -> bool:
    """Tense/mood combination outside {present, imparfait, futur simple,
    passe compose}, detected from features and auxiliary patterns."""
    tok = sent.tokens[i]
    form = tok.morph.get("VerbForm")
    if form == "Part":
        auxes = _tense_auxiliaries(sent, children, i)
        if not auxes:
            return False  # bare participle: a participial clause, not a tense
        if len(auxes) >= 2:
            return True  # temps surcompose
        aux = auxes[0]
        mood = aux.morph.get("Mood", "Ind")
        tense = aux.morph.get("Tense")
        if mood in ("Cnd", "Sub"):
            return True
        return tense in ("Imp", "Fut", "Past")  # plus-que-parfait etc.
    if form == "Fin":
        mood = tok.morph.get("Mood", "Ind")
        tense = tok.morph.get("Tense")
        if mood in ("Cnd", "Sub"):
            return True
        return mood == "Ind" and tense == "Past"  # passe simple
    return False


def _sentence_syntactic_counts(sent: Sentence) -> list[int]:
    counts = [0] * 17
    tokens = sent.tokens
    children = _children(sent)

    passive_verbs: set[int] = set()
    parataxis_indices: set[int] = set()
    for i, tok in enumerate(tokens):
        base = tok.base_deprel
        head = tok.head
        # Y1 coordinate clauses
        if base == "conj" and head is not None:
            if tok.upos == "VERB" and tokens[head].upos == "VERB":
                counts[0] += 1
        # Y2 relative clauses
        if tok.deprel == "acl:relcl":
            counts[1] += 1
        elif base == "acl" and any(
            _is_relative_pronoun(tokens[c]) for c in children.get(i, [])
        ):
            counts[1] += 1
        # Y3 adverbial clauses
        if base == "advcl":
            counts[2] += 1
        # Y4 participle clauses
        if base in ("acl", "advcl") and tok.morph.get("VerbForm") == "Part":
            counts[3] += 1
        # Y6 interpolations, first half: parataxis
        if base == "parataxis":
            counts[5] += 1
            parataxis_indices.add(i)
        # Y7 appositions
        if base == "appos":
            counts[6] += 1
        # Y9 non-finite clauses
        if base in ("xcomp", "ccomp", "acl") and tok.morph.get("VerbForm") == "Inf":
            counts[8] += 1
        # Y10 passives, once per verb
        if tok.deprel in ("nsubj:pass", "aux:pass") and head is not None:
            passive_verbs.add(head)
        # Y12 conditional mood
        if tok.morph.get("Mood") == "Cnd":
            counts[11] += 1
        # Y16 completive clauses with a finite embedded verb
        if base == "ccomp" and (
            _is_finite(tok)
            or any(
                tokens[c].base_deprel == "aux" and _is_finite(tokens[c])
                for c in children.get(i, [])
            )
        ):
            counts[15] += 1
        # Y17 subject after its verbal head
        if base == "nsubj" and head is not None and i > head \
                and tokens[head].upos in ("VERB", "AUX"):
            counts[16] += 1

    # Y5 clefts: "ce" + "etre" + relative pronoun within a 4-token window
    for i, tok in enumerate(tokens):
        if tok.lemma.lower() != "ce":
            continue
        limit = min(i + 4, len(tokens) - 1)
        for j in range(i + 1, limit + 1):
            if tokens[j].lemma.lower() != "être":
                continue
            if any(_is_relative_pronoun(tokens[l]) for l in range(j + 1, limit + 1)):
                counts[4] += 1
                break

    # Y6 second half: dash- or comma-delimited finite insertions that are
    # not already covered by parataxis or by the clause indicators
    for delim_forms in (_DASH_FORMS, frozenset({","})):
        marks = [
            i for i, t in enumerate(tokens)
            if t.form in delim_forms and (t.upos == "PUNCT" or t.upos == "X")
        ]
        for a, b in zip(marks[::2], marks[1::2]):
            if a == 0 or b >= len(tokens) - 1 or b <= a + 1:
                continue
            inside = range(a + 1, b)
            has_interpolated_verb = any(
                _is_finite(tokens[k])
                and tokens[k].head is not None
                and k not in parataxis_indices
                and tokens[k].base_deprel
                not in ("acl", "advcl", "appos", "conj", "ccomp", "xcomp")
                for k in inside
            )
            outside_finite = any(
                _is_finite(tokens[k])
                for k in range(len(tokens))
                if k <= a or k >= b
            )
            if has_interpolated_verb and outside_finite:
                counts[5] += 1

    # Y8 enumerations: three or more coordinated or comma-chained siblings
    for head, deps in children.items():
        conj_deps = [d for d in deps if tokens[d].base_deprel == "conj"]
        if len(conj_deps) >= 3:
            counts[7] += 1
            continue
        by_relation: dict[str, list[int]] = {}
        for d in deps:
            base = tokens[d].base_deprel
            if base not in ("punct", "conj"):
                by_relation.setdefault(base, []).append(d)
        for siblings in by_relation.values():
            if len(siblings) < 3:
                continue
            siblings.sort()
            commas = [
                i for i, t in enumerate(tokens) if t.form == ","
            ]
            separated = all(
                any(x < c < y for c in commas)
                for x, y in zip(siblings, siblings[1:])
            )
            if separated:
                counts[7] += 1
                break

    counts[9] = len(passive_verbs)

    # Y11 complex tenses, once per verb group (auxiliaries themselves skipped)
    for i, tok in enumerate(tokens):
        if tok.upos not in ("VERB", "AUX") or tok.base_deprel == "aux":
            continue
        if _is_complex_tense(sent, children, i):
            counts[10] += 1

    # Y13 negations, once per scope (markers sharing a head verb)
    neg_indices: list[int] = []
    for i, tok in enumerate(tokens):
        lemma = tok.lemma.lower()
        if tok.morph.get("Polarity") == "Neg" or lemma in NEGATION_LEMMAS:
            neg_indices.append(i)
    ne_heads = {
        tokens[i].head for i in neg_indices if tokens[i].lemma.lower() == "ne"
    }
    for i, tok in enumerate(tokens):
        if tok.lemma.lower() == "plus" and tok.head in ne_heads and i not in neg_indices:
            neg_indices.append(i)
    scopes = {
        tokens[i].head if tokens[i].head is not None else i for i in neg_indices
    }
    counts[12] = len(scopes)

    # Y14 complex noun phrases
    for i, tok in enumerate(tokens):
        if tok.upos != "NOUN":
            continue
        modifiers = [
            c for c in children.get(i, [])
            if tokens[c].base_deprel in ("amod", "nmod", "acl")
        ]
        if len(modifiers) >= 2:
            counts[13] += 1
            continue
        chain = any(
            tokens[c].base_deprel == "nmod"
            and any(
                tokens[g].base_deprel == "nmod" for g in children.get(c, [])
            )
            for c in children.get(i, [])
        )
        if chain:
            counts[13] += 1

    # Y15 matched bracket pairs
    stack: list[str] = []
    for tok in tokens:
        if tok.is_bracket_open:
            stack.append(tok.form)
        elif tok.is_bracket_close and stack:
            opener = stack.pop()
            if (opener, tok.form) in (("(", ")"), ("[", "]")):
                counts[14] += 1

    return counts


def extract_syntactic(doc: Document) -> tuple[tuple[float, ...], list[str]]:
    """The 17 clause/verb-form/NP indicators, per 100 words.

    Sentences without a usable head graph contribute nothing and are
    reported in the warnings.
    """
    warnings: list[str] = []
    words = doc.word_count()
    if words == 0:
        warnings.append("document has no word tokens; rates reported as 0")
    totals = [0] * 17
    skipped = 0
    for sent in doc.sentences:
        if not sent.has_heads:
            skipped += 1
            continue
        for k, c in enumerate(_sentence_syntactic_counts(sent)):
            totals[k] += c
    if skipped:
        warnings.append(
            f"{skipped} sentence(s) without dependency heads contributed no syntactic counts"
        )
    return tuple(_rate(c, words) for c in totals), warnings


# ---------------------------------------------------------------------------
# Structure indicators
# ---------------------------------------------------------------------------

def _connective_matches(
    sent: Sentence, connectives: ConnectivesLexicon
) -> list[tuple[int, int, str]]:
    """Longest-match connective spans: (start, n_tokens, entry_key)."""
    forms = [t.form.lower() for t in sent.tokens]
    matches: list[tuple[int, int, str]] = []
    i = 0
    while i < len(forms):
        found = None
        for n in range(min(connectives.max_tokens, len(forms) - i), 0, -1):
            candidate = " ".join(forms[i : i + n])
            if candidate in connectives.entries:
                found = (i, n, candidate)
                break
        if found:
            matches.append(found)
            i += found[1]
        else:
            i += 1
    return matches


def _is_sentence_initial(sent: Sentence, index: int) -> bool:
    return all(t.upos == "PUNCT" for t in sent.tokens[:index])


def extract_structure(
    doc: Document, connectives: ConnectivesLexicon
) -> tuple[tuple[float, float, float], list[str]]:
    """Connective rate, complex-connective rate, and temporal-break rate.

    A match is complex when the lexicon marks it complex, when a
    conjunction connective opens the sentence (its clause precedes the
    main clause), or when an adverbial connective is not sentence-initial.
    A temporal break is a tense change between adjacent finite verbs
    within one paragraph.
    """
    warnings: list[str] = []
    words = doc.word_count()
    if words == 0:
        warnings.append("document has no word tokens; rates reported as 0")
    total = 0
    complex_total = 0
    for sent in doc.sentences:
        for start, _n, key in _connective_matches(sent, connectives):
            total += 1
            entry = connectives.entries[key]
            initial = _is_sentence_initial(sent, start)
            positionally_complex = (
                entry.category == "conjunction" and initial
            ) or (entry.category == "adverbial" and not initial)
            if entry.complexity_class == "complex" or positionally_complex:
                complex_total += 1

    breaks = 0
    tenses_by_paragraph: dict[int, list[str]] = {}
    for sent in doc.sentences:
        seq = tenses_by_paragraph.setdefault(sent.paragraph_id, [])
        for tok in sent.tokens:
            if _is_finite(tok) and "Tense" in tok.morph:
                seq.append(tok.morph["Tense"])
    for seq in tenses_by_paragraph.values():
        breaks += sum(1 for a, b in zip(seq, seq[1:]) if a != b)

    return (
        (_rate(total, words), _rate(complex_total, words), _rate(breaks, words)),
        warnings,
    )


# ---------------------------------------------------------------------------
# Full vector
# ---------------------------------------------------------------------------

def extract_features(
    doc: Document,
    graded: GradedLexicon | Sequence[GradedLexicon],
    connectives: ConnectivesLexicon,
) -> FeatureVector:
    """Compute all 28 indicators in catalog order, with any degenerate-case
    warnings from the sub-extractors attached."""
    lexical, w1 = extract_lexical(doc, graded)
    length, w2 = extract_length(doc)
    syntactic, w3 = extract_syntactic(doc)
    structure, w4 = extract_structure(doc, connectives)
    values = tuple(lexical) + tuple(length) + tuple(syntactic) + tuple(structure)
    # identical warnings from several extractors collapse to one
    warnings: list[str] = []
    for w in (*w1, *w2, *w3, *w4):
        if w not in warnings:
            warnings.append(w)
    return FeatureVector(values, tuple(warnings))


# ---------------------------------------------------------------------------
# Serialization (catalog order is the compatibility contract)
# ---------------------------------------------------------------------------

def features_tsv_header() -> str:
    return "\t".join(("doc_id",) + FEATURE_NAMES)


def features_tsv_row(doc_id: str, fv: FeatureVector) -> str:
    return "\t".join([doc_id] + [repr(v) for v in fv.values])


def features_to_tsv(rows: Iterable[tuple[str, FeatureVector]]) -> str:
    lines = [features_tsv_header()]
    lines.extend(features_tsv_row(doc_id, fv) for doc_id, fv in rows)
    return "\n".join(lines) + "\n"


def features_to_json(doc_id: str, fv: FeatureVector) -> str:
    payload = {"doc_id": doc_id, "features": fv.as_dict(), "warnings": list(fv.warnings)}
    return json.dumps(payload, ensure_ascii=False, sort_keys=True)
