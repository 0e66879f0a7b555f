"""Reference-less comprehension scoring for French texts.

Parses CoNLL-U and constituency input, computes 28 linguistic indicators,
trains simple-vs-complex classifiers whose calibrated probability of the
"simple" class, times 100, is a [0, 100] comprehension score, and ships
the evaluation tooling (best-worst scaling, reliability statistics) plus
an HTTP annotation service used to collect human judgments.
"""

__version__ = "0.1.0"

from .documents import ConstituencyNode, Document, Sentence, Token
from .indicators import FEATURE_NAMES, FeatureVector, extract_features
from .lexicons import (
    ConnectivesLexicon,
    GradedLexicon,
    default_connectives,
    default_graded_lexicon,
)

__all__ = [
    "ConstituencyNode",
    "Document",
    "Sentence",
    "Token",
    "FEATURE_NAMES",
    "FeatureVector",
    "extract_features",
    "ConnectivesLexicon",
    "GradedLexicon",
    "default_connectives",
    "default_graded_lexicon",
    "__version__",
]
