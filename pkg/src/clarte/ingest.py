"""Readers for CoNLL-U files, bracketed constituency trees, and plain text,
plus French syllable counting for the readability baselines."""

from __future__ import annotations

import re
from typing import Iterable

from .documents import (
    ConstituencyNode,
    Document,
    Sentence,
    Token,
    UD_POS_TAGS,
)


class ConlluError(ValueError):
    """Malformed CoNLL-U input (message carries the line number)."""


class TreeParseError(ValueError):
    """Malformed bracketed tree (message carries the character offset)."""


# ---------------------------------------------------------------------------
# CoNLL-U
# ---------------------------------------------------------------------------

_RANGE_ID = re.compile(r"^\d+-\d+$")
_EMPTY_ID = re.compile(r"^\d+\.\d+$")


def _parse_feats(feats: str, lineno: int) -> dict[str, str]:
    if feats in ("_", ""):
        return {}
    morph: dict[str, str] = {}
    for item in feats.split("|"):
        key, sep, value = item.partition("=")
        if not sep or not key or not value:
            raise ConlluError(f"line {lineno}: bad FEATS item {item!r}")
        morph[key] = value
    return morph


def parse_conllu(source: str | Iterable[str], default_id: str = "doc") -> list[Document]:
    """Parse a CoNLL-U character stream into Documents.

    One Document per ``# newdoc`` marker (a single Document with id
    ``default_id`` if there are none).  Multiword-token range lines
    ("3-4") and empty nodes ("3.1") are skipped.  The 1-based HEAD column
    (0 = root) is converted to 0-based token indices with None for the
    root.  Empty input yields an empty list.
    """
    if isinstance(source, str):
        lines: Iterable[str] = source.splitlines()
    else:
        lines = (line.rstrip("\n").rstrip("\r") for line in source)

    docs: list[Document] = []
    doc_id: str | None = None
    doc_sentences: list[Sentence] = []
    paragraph = 0
    pending_newpar = False
    sent_id: str | None = None
    # (form, lemma, upos, morph, head_id, deprel, lineno) per kept token line
    rows: list[tuple[str, str, str, dict[str, str], int, str, int]] = []
    ids: list[int] = []

    def flush_sentence(lineno: int) -> None:
        nonlocal rows, ids, sent_id, paragraph, pending_newpar
        if not rows:
            sent_id = None
            return
        if pending_newpar and doc_sentences:
            paragraph += 1
        pending_newpar = False
        id_to_index = {tid: i for i, tid in enumerate(ids)}
        if len(id_to_index) != len(ids):
            raise ConlluError(f"line {lineno}: duplicate token id in sentence")
        tokens: list[Token] = []
        root_count = 0
        for i, (form, lemma, upos, morph, head_id, deprel, tok_line) in enumerate(rows):
            if head_id == 0:
                head: int | None = None
                root_count += 1
            else:
                if head_id not in id_to_index:
                    raise ConlluError(
                        f"line {tok_line}: HEAD {head_id} does not exist in sentence"
                    )
                head = id_to_index[head_id]
                if head == i:
                    raise ConlluError(f"line {tok_line}: token is its own head")
            tokens.append(Token(form, lemma, upos, morph, head, deprel))
        if root_count != 1:
            raise ConlluError(
                f"line {lineno}: sentence has {root_count} roots, expected exactly 1"
            )
        _assert_tree(tokens, lineno)
        doc_sentences.append(
            Sentence(tuple(tokens), paragraph_id=paragraph, sent_id=sent_id)
        )
        rows = []
        ids = []
        sent_id = None

    def flush_document(lineno: int) -> None:
        nonlocal doc_sentences, paragraph, pending_newpar
        flush_sentence(lineno)
        if doc_sentences:
            docs.append(Document(doc_id or default_id, tuple(doc_sentences)))
        doc_sentences = []
        paragraph = 0
        pending_newpar = False

    lineno = 0
    for raw in lines:
        lineno += 1
        line = raw.rstrip("\n")
        if not line.strip():
            flush_sentence(lineno)
            continue
        if line.startswith("#"):
            comment = line[1:].strip()
            if comment.startswith("newdoc"):
                flush_document(lineno)
                _, sep, value = comment.partition("=")
                doc_id = value.strip() if sep else default_id
            elif comment.startswith("newpar"):
                pending_newpar = True
            elif comment.startswith("sent_id"):
                _, sep, value = comment.partition("=")
                sent_id = value.strip() if sep else None
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise ConlluError(
                f"line {lineno}: expected 10 tab-separated columns, got {len(cols)}"
            )
        tok_id = cols[0]
        if _RANGE_ID.match(tok_id) or _EMPTY_ID.match(tok_id):
            continue  # multiword-token range or empty node
        try:
            tid = int(tok_id)
        except ValueError:
            raise ConlluError(f"line {lineno}: bad token id {tok_id!r}") from None
        try:
            head_id = int(cols[6])
        except ValueError:
            raise ConlluError(f"line {lineno}: bad HEAD value {cols[6]!r}") from None
        upos = cols[3] if cols[3] != "_" else "X"
        if upos not in UD_POS_TAGS:
            raise ConlluError(f"line {lineno}: unknown UPOS tag {cols[3]!r}")
        ids.append(tid)
        rows.append(
            (cols[1], cols[2], upos, _parse_feats(cols[5], lineno), head_id, cols[7], lineno)
        )

    flush_document(lineno + 1)
    return docs


def _assert_tree(tokens: list[Token], lineno: int) -> None:
    """Every token must be reachable from the root (no head cycles)."""
    children: dict[int | None, list[int]] = {}
    for i, tok in enumerate(tokens):
        children.setdefault(tok.head, []).append(i)
    seen: set[int] = set()
    stack = list(children.get(None, []))
    while stack:
        i = stack.pop()
        seen.add(i)
        stack.extend(children.get(i, []))
    if len(seen) != len(tokens):
        raise ConlluError(f"line {lineno}: head graph contains a cycle")


def write_conllu(docs: Iterable[Document]) -> str:
    """Serialize Documents back to CoNLL-U (UTF-8 text, LF endings).

    XPOS/DEPS/MISC are not modeled and are written as "_"; FEATS keys are
    sorted case-insensitively as in UD releases.
    """
    out: list[str] = []
    for doc in docs:
        out.append(f"# newdoc id = {doc.id}")
        previous_par: int | None = None
        for sent in doc.sentences:
            if previous_par is not None and sent.paragraph_id != previous_par:
                out.append("# newpar")
            previous_par = sent.paragraph_id
            if sent.sent_id is not None:
                out.append(f"# sent_id = {sent.sent_id}")
            for i, tok in enumerate(sent.tokens):
                feats = "|".join(
                    f"{k}={v}" for k, v in sorted(tok.morph.items(), key=lambda kv: kv[0].lower())
                ) or "_"
                head = 0 if tok.head is None else tok.head + 1
                out.append(
                    "\t".join(
                        (
                            str(i + 1),
                            tok.form,
                            tok.lemma,
                            tok.upos,
                            "_",
                            feats,
                            str(head),
                            tok.deprel or "_",
                            "_",
                            "_",
                        )
                    )
                )
            out.append("")
    return "\n".join(out) + ("\n" if out else "")


# ---------------------------------------------------------------------------
# Bracketed constituency trees
# ---------------------------------------------------------------------------

def parse_bracketed_tree(text: str) -> ConstituencyNode:
    """Parse one Penn-style bracketed tree, e.g. "(NP (DET Le) (NC chat))".

    Labels are preserved verbatim; a preterminal with its terminal string
    becomes a leaf node.  Raises TreeParseError with a character offset on
    unbalanced or malformed input.
    """
    if not text.strip():
        raise TreeParseError("empty tree string")
    pos = 0
    n = len(text)

    def skip_ws() -> None:
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def read_atom() -> str:
        nonlocal pos
        start = pos
        while pos < n and not text[pos].isspace() and text[pos] not in "()":
            pos += 1
        if pos == start:
            raise TreeParseError(f"offset {pos}: expected a label or terminal")
        return _unescape_atom(text[start:pos])

    def read_node() -> ConstituencyNode:
        nonlocal pos
        skip_ws()
        if pos >= n or text[pos] != "(":
            raise TreeParseError(f"offset {pos}: expected '('")
        open_offset = pos
        pos += 1
        skip_ws()
        label = read_atom()
        children: list[ConstituencyNode] = []
        terminal: str | None = None
        while True:
            skip_ws()
            if pos >= n:
                raise TreeParseError(
                    f"offset {open_offset}: unbalanced parenthesis (never closed)"
                )
            if text[pos] == ")":
                pos += 1
                break
            if text[pos] == "(":
                if terminal is not None:
                    raise TreeParseError(
                        f"offset {pos}: mixed terminal and child nodes under {label!r}"
                    )
                children.append(read_node())
            else:
                if children or terminal is not None:
                    raise TreeParseError(
                        f"offset {pos}: unexpected second terminal under {label!r}"
                    )
                terminal = read_atom()
        if children:
            return ConstituencyNode(label, tuple(children))
        if terminal is None:
            raise TreeParseError(f"offset {open_offset}: node {label!r} is empty")
        return ConstituencyNode(label, (), terminal)

    node = read_node()
    skip_ws()
    if pos != n:
        raise TreeParseError(f"offset {pos}: trailing content after tree")
    return node


# Penn-style escapes so bracket tokens survive serialization.
def _escape_atom(atom: str) -> str:
    return atom.replace("(", "-LRB-").replace(")", "-RRB-")


def _unescape_atom(atom: str) -> str:
    return atom.replace("-LRB-", "(").replace("-RRB-", ")")


def write_bracketed_tree(node: ConstituencyNode) -> str:
    if node.is_leaf:
        return f"({_escape_atom(node.label)} {_escape_atom(node.leaf_form)})"
    return ("(" + _escape_atom(node.label) + " "
            + " ".join(write_bracketed_tree(c) for c in node.children) + ")")


def load_tree_sidecar(source: str | Iterable[str]) -> dict[str, ConstituencyNode]:
    """Read a sidecar file of trees, one "<sent_id>\\t<tree>" per line."""
    if isinstance(source, str):
        lines: Iterable[str] = source.splitlines()
    else:
        lines = source
    trees: dict[str, ConstituencyNode] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        sent_id, sep, tree_text = line.partition("\t")
        if not sep:
            raise TreeParseError(f"line {lineno}: expected '<sent_id>\\t<tree>'")
        trees[sent_id.strip()] = parse_bracketed_tree(tree_text)
    return trees


def attach_trees(doc: Document, trees: dict[str, ConstituencyNode]) -> Document:
    """Attach sidecar trees to a Document's sentences by sent_id.

    Sentences without a matching tree are left unchanged; leaf/token
    mismatches raise ValueError (via the Sentence invariant).
    """
    sentences = []
    for sent in doc.sentences:
        tree = trees.get(sent.sent_id) if sent.sent_id is not None else None
        if tree is None:
            sentences.append(sent)
        else:
            sentences.append(
                Sentence(sent.tokens, tree, sent.paragraph_id, sent.sent_id)
            )
    return Document(doc.id, tuple(sentences), doc.source_label)


# ---------------------------------------------------------------------------
# Plain-text segmentation
# ---------------------------------------------------------------------------

# Abbreviations whose trailing period never ends a sentence.
ABBREVIATIONS = frozenset({
    "m.", "mme.", "mlle.", "dr.", "me.", "etc.", "cf.", "ex.", "p.",
    "art.", "chap.", "vol.", "no.",
})

_SENTENCE_END = re.compile(r"([.!?…])(\s+)(?=[A-Z0-9À-Ý])")
_APOSTROPHES = ("'", "’")


def _is_abbreviation(word: str) -> bool:
    w = word.lower()
    if w in ABBREVIATIONS:
        return True
    # single capital + period, e.g. initials in "J. Dupont"
    return len(word) == 2 and word[0].isupper() and word[1] == "."


def _split_sentences(paragraph: str) -> list[str]:
    pieces: list[str] = []
    start = 0
    for m in _SENTENCE_END.finditer(paragraph):
        if m.group(1) == ".":
            before = paragraph[start : m.end(1)]
            last_word = before.split()[-1] if before.split() else ""
            if _is_abbreviation(last_word):
                continue
        pieces.append(paragraph[start : m.end(1)])
        start = m.end()
    rest = paragraph[start:].strip()
    if rest:
        pieces.append(rest)
    return [p.strip() for p in pieces if p.strip()]


def _tokenize(sentence: str) -> list[str]:
    """Whitespace/punctuation tokenizer: punctuation separates and is
    dropped, apostrophes keep the clitic ("l'homme" -> "l'", "homme"),
    abbreviation periods stay attached ("M." stays one token)."""
    tokens: list[str] = []
    word = ""
    chars = list(sentence)
    for i, c in enumerate(chars):
        if c.isalnum() or c == "-":
            word += c
        elif c in _APOSTROPHES and word:
            tokens.append(word + c)
            word = ""
        elif c == "." and word:
            if _is_abbreviation(word + "."):
                tokens.append(word + ".")
                word = ""
            else:
                tokens.append(word)
                word = ""
        else:
            if word:
                tokens.append(word)
                word = ""
    if word:
        tokens.append(word)
    return tokens


def segment_plain_text(text: str, doc_id: str = "doc") -> Document:
    """Segment raw UTF-8 text into an unparsed Document.

    Paragraphs are separated by blank lines; sentences split on
    {. ! ? ...} followed by whitespace and an uppercase letter or digit,
    with an abbreviation stop-list suppressing false boundaries.  Tokens
    carry upos "X" and no dependency information: the result serves the
    readability baselines only, never the indicator extractors.
    """
    if not text.strip():
        raise ValueError("empty document")
    sentences: list[Sentence] = []
    paragraphs = re.split(r"\n\s*\n", text)
    par_index = 0
    for par in paragraphs:
        par = par.strip()
        if not par:
            continue
        par = re.sub(r"\s+", " ", par)
        for sent_text in _split_sentences(par):
            forms = _tokenize(sent_text)
            if not forms:
                continue
            tokens = tuple(
                Token(form=f, lemma=f.lower(), upos="X") for f in forms
            )
            sentences.append(Sentence(tokens, paragraph_id=par_index))
        par_index += 1
    if not sentences:
        raise ValueError("empty document")
    return Document(doc_id, tuple(sentences))


# ---------------------------------------------------------------------------
# French syllable counting
# ---------------------------------------------------------------------------

_FR_VOWELS = set("aeiouyéèêëàâîïôûùü")


def count_syllables_fr(word: str) -> int:
    """Heuristic French syllable count: maximal vowel groups, minus one
    for a silent final schwa ("-e", "-es", "-ent" after a consonant),
    floored at 1."""
    stripped = "".join(c for c in word if c.isalnum())
    if not stripped:
        raise ValueError(f"no letters left after stripping punctuation: {word!r}")
    w = stripped.lower()
    count = 0
    previous_vowel = False
    for c in w:
        vowel = c in _FR_VOWELS
        if vowel and not previous_vowel:
            count += 1
        previous_vowel = vowel
    for ending in ("ent", "es", "e"):
        if w.endswith(ending) and len(w) > len(ending):
            before = w[-len(ending) - 1]
            if before not in _FR_VOWELS and before.isalpha() and count >= 2:
                count -= 1
            break
    return max(count, 1)
