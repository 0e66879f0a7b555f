"""Domain types for parsed documents: tokens, sentences, trees, documents."""

from __future__ import annotations

from dataclasses import dataclass, field

# The 17 Universal Dependencies POS tags ("X" doubles as the placeholder
# for unparsed text).
UD_POS_TAGS = frozenset({
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
})

OPEN_BRACKETS = frozenset({"(", "["})
CLOSE_BRACKETS = frozenset({")", "]"})


@dataclass(frozen=True)
class Token:
    """One analyzed word.

    ``head`` is the 0-based index of the governing token within the same
    sentence, or None for the root (and for every token of unparsed text).
    ``morph`` holds key=value morphological features, e.g. {"Mood": "Cnd"}.
    """

    form: str
    lemma: str
    upos: str
    morph: dict[str, str] = field(default_factory=dict)
    head: int | None = None
    deprel: str = ""

    @property
    def is_bracket_open(self) -> bool:
        return self.form in OPEN_BRACKETS

    @property
    def is_bracket_close(self) -> bool:
        return self.form in CLOSE_BRACKETS

    @property
    def base_deprel(self) -> str:
        """Dependency relation without its subtype, e.g. acl:relcl -> acl."""
        return self.deprel.split(":", 1)[0]


@dataclass(frozen=True)
class ConstituencyNode:
    """Phrase-structure node: a leaf (leaf_form set) xor an inner node."""

    label: str
    children: tuple["ConstituencyNode", ...] = ()
    leaf_form: str | None = None

    def __post_init__(self) -> None:
        if (self.leaf_form is None) == (len(self.children) == 0):
            raise ValueError(
                f"node {self.label!r} must be a leaf xor have children"
            )

    @property
    def is_leaf(self) -> bool:
        return self.leaf_form is not None

    def height(self) -> int:
        """Tree height with the leaf = 0 convention."""
        if self.is_leaf:
            return 0
        return 1 + max(child.height() for child in self.children)

    def leaves(self) -> list[str]:
        """Terminal strings, left to right."""
        if self.is_leaf:
            assert self.leaf_form is not None
            return [self.leaf_form]
        out: list[str] = []
        for child in self.children:
            out.extend(child.leaves())
        return out


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]
    const_tree: ConstituencyNode | None = None
    paragraph_id: int = 0
    sent_id: str | None = None

    def __post_init__(self) -> None:
        if not self.tokens:
            raise ValueError("sentence must contain at least one token")
        if self.const_tree is not None:
            leaves = self.const_tree.leaves()
            forms = [t.form for t in self.tokens]
            if leaves != forms:
                raise ValueError(
                    f"constituency leaves {leaves!r} do not match "
                    f"token forms {forms!r}"
                )

    @property
    def has_heads(self) -> bool:
        """True when the dependency annotation forms a usable tree:
        exactly one root and all other heads present and in range."""
        roots = 0
        for i, tok in enumerate(self.tokens):
            if tok.head is None:
                roots += 1
            elif not (0 <= tok.head < len(self.tokens)) or tok.head == i:
                return False
        return roots == 1

    def word_tokens(self) -> list[Token]:
        """Tokens that count as words: not punctuation/symbols, and
        carrying at least one letter or digit."""
        return [t for t in self.tokens if is_word_token(t)]


@dataclass(frozen=True)
class Document:
    id: str
    sentences: tuple[Sentence, ...]
    source_label: str | None = None  # "simple" | "complex" | None

    def __post_init__(self) -> None:
        if not self.sentences:
            raise ValueError(f"document {self.id!r} has no sentences")
        if self.source_label not in (None, "simple", "complex"):
            raise ValueError(f"invalid source_label {self.source_label!r}")
        pids = [s.paragraph_id for s in self.sentences]
        if any(b < a for a, b in zip(pids, pids[1:])):
            raise ValueError(
                f"document {self.id!r}: paragraph ids must be non-decreasing"
            )

    def tokens(self) -> list[Token]:
        return [t for s in self.sentences for t in s.tokens]

    def word_count(self) -> int:
        return sum(len(s.word_tokens()) for s in self.sentences)


def is_word_token(tok: Token) -> bool:
    """A word token is anything that is not punctuation or a bare symbol."""
    if tok.upos in ("PUNCT", "SYM"):
        return False
    return any(c.isalnum() for c in tok.form)


def dependency_height(sentence: Sentence) -> int:
    """Height of the dependency tree: root at depth 0, height = max depth.

    Requires a well-formed head graph (``sentence.has_heads``).
    """
    depths = [-1] * len(sentence.tokens)

    def depth_of(i: int) -> int:
        if depths[i] >= 0:
            return depths[i]
        seen = []
        j: int | None = i
        while j is not None and depths[j] < 0:
            seen.append(j)
            j = sentence.tokens[j].head
            if j is not None and j in seen:
                raise ValueError("cycle in dependency heads")
        base = 0 if j is None else depths[j] + 1
        for k in reversed(seen):
            depths[k] = base
            base += 1
        return depths[i]

    return max(depth_of(i) for i in range(len(sentence.tokens)))
