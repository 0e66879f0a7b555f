"""Shared builders for hand-annotated test sentences."""

from __future__ import annotations

import pytest

from clarte.documents import ConstituencyNode, Document, Sentence, Token
from clarte.lexicons import default_connectives, default_graded_lexicon


def tok(form, lemma, upos, head=None, deprel="root", **morph):
    """Compact Token builder; morph given as keyword pairs."""
    return Token(form=form, lemma=lemma, upos=upos,
                 morph={k: v for k, v in morph.items()}, head=head,
                 deprel=deprel)


def sent(*tokens, tree=None, paragraph_id=0, sent_id=None):
    return Sentence(tuple(tokens), const_tree=tree,
                    paragraph_id=paragraph_id, sent_id=sent_id)


def doc(*sentences, doc_id="test-doc", label=None):
    return Document(id=doc_id, sentences=tuple(sentences), source_label=label)


def leaf(label, form):
    return ConstituencyNode(label, leaf_form=form)


def node(label, *children):
    return ConstituencyNode(label, children=tuple(children))


@pytest.fixture(scope="session")
def graded():
    return default_graded_lexicon()


@pytest.fixture(scope="session")
def connectives():
    return default_connectives()


# A small fully-annotated sentence used in several suites:
# "Le chat mange la souris ." (the cat eats the mouse)
def cat_sentence(**kwargs):
    return sent(
        tok("Le", "le", "DET", 1, "det"),
        tok("chat", "chat", "NOUN", 2, "nsubj"),
        tok("mange", "manger", "VERB", None, "root",
            VerbForm="Fin", Mood="Ind", Tense="Pres"),
        tok("la", "le", "DET", 4, "det"),
        tok("souris", "souris", "NOUN", 2, "obj"),
        tok(".", ".", "PUNCT", 2, "punct"),
        **kwargs,
    )
