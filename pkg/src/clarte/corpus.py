"""Labeled feature datasets: construction, statistics, persistence, splits."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence, TextIO

import numpy as np

from .documents import Document
from .indicators import FEATURE_NAMES, N_FEATURES, extract_features
from .ingest import attach_trees, load_tree_sidecar, parse_conllu
from .lexicons import ConnectivesLexicon, GradedLexicon

LABELS = ("complex", "simple")  # index = class value; 1 means simple


@dataclass(frozen=True)
class LabeledDataset:
    """Feature matrix with binary labels (1 = simple, 0 = complex).

    A pair id ties a simplified text to its complex twin; paired documents
    must never straddle a train/validation split.
    """

    doc_ids: tuple[str, ...]
    X: np.ndarray
    y: np.ndarray
    pair_ids: tuple[str | None, ...]

    def __post_init__(self) -> None:
        n = len(self.doc_ids)
        if self.X.shape != (n, N_FEATURES):
            raise ValueError(f"X must be ({n}, {N_FEATURES}), got {self.X.shape}")
        if self.y.shape != (n,):
            raise ValueError(f"y must be ({n},), got {self.y.shape}")
        if len(self.pair_ids) != n:
            raise ValueError("pair_ids length mismatch")
        if n and not set(np.unique(self.y)) <= {0, 1}:
            raise ValueError("labels must be 0 or 1")
        if len(set(self.doc_ids)) != n:
            raise ValueError("duplicate doc_ids")
        counts: dict[str, list[int]] = {}
        for i, pid in enumerate(self.pair_ids):
            if pid is not None:
                counts.setdefault(pid, []).append(int(self.y[i]))
        for pid, labels in counts.items():
            if sorted(labels) != [0, 1]:
                raise ValueError(
                    f"pair {pid!r} must have exactly one simple and one complex item"
                )

    def __len__(self) -> int:
        return len(self.doc_ids)

    def subset(self, indices: Sequence[int]) -> "LabeledDataset":
        idx = list(indices)
        return LabeledDataset(
            doc_ids=tuple(self.doc_ids[i] for i in idx),
            X=self.X[idx].copy(),
            y=self.y[idx].copy(),
            pair_ids=tuple(self.pair_ids[i] for i in idx),
        )


@dataclass(frozen=True)
class CorpusStats:
    n_texts: int
    mean_words_per_text: float
    mean_words_per_sentence: float

    def __post_init__(self) -> None:
        if self.n_texts < 1:
            raise ValueError("at least one text required")
        if self.mean_words_per_text <= 0 or self.mean_words_per_sentence <= 0:
            raise ValueError("means must be positive")


def dataset_from_documents(
    docs: Sequence[Document],
    graded: GradedLexicon | Sequence[GradedLexicon],
    connectives: ConnectivesLexicon,
    pair_key: Callable[[Document], str | None] | None = None,
) -> tuple[LabeledDataset, list[str]]:
    """Featurize labeled documents into a dataset.

    Returns the dataset and the per-document extraction warnings, each
    prefixed with its document id.
    """
    ids: list[str] = []
    rows: list[tuple[float, ...]] = []
    labels: list[int] = []
    pairs: list[str | None] = []
    warnings: list[str] = []
    for doc in docs:
        if doc.source_label is None:
            raise ValueError(f"document {doc.id} has no label")
        fv = extract_features(doc, graded, connectives)
        ids.append(doc.id)
        rows.append(fv.values)
        labels.append(1 if doc.source_label == "simple" else 0)
        pairs.append(pair_key(doc) if pair_key else None)
        warnings.extend(f"{doc.id}: {w}" for w in fv.warnings)
    X = np.array(rows, dtype=float) if rows else np.empty((0, N_FEATURES))
    y = np.array(labels, dtype=int)
    return LabeledDataset(tuple(ids), X, y, tuple(pairs)), warnings


def _load_labeled_dir(directory: Path, label: str) -> dict[str, Document]:
    """One document per .conllu file, keyed by filename stem; an optional
    ``<stem>.trees`` sidecar attaches constituency trees."""
    files = sorted(directory.glob("*.conllu"))
    if not files:
        raise ValueError(f"no .conllu files in {directory}")
    out: dict[str, Document] = {}
    for path in files:
        docs = parse_conllu(path.read_text(encoding="utf-8"), default_id=path.stem)
        if len(docs) != 1:
            raise ValueError(f"{path}: expected exactly one document, found {len(docs)}")
        doc = docs[0]
        sidecar = path.with_suffix(".trees")
        if sidecar.exists():
            doc = attach_trees(doc, load_tree_sidecar(sidecar.read_text(encoding="utf-8")))
        out[path.stem] = Document(
            id=f"{label}/{path.stem}",
            sentences=doc.sentences,
            source_label=label,
        )
    return out


def build_dataset(
    simple_dir: str | Path,
    complex_dir: str | Path,
    aligned: bool,
    graded: GradedLexicon | Sequence[GradedLexicon],
    connectives: ConnectivesLexicon,
) -> tuple[LabeledDataset, list[str]]:
    """Read two directories of CoNLL-U files into a labeled dataset.

    In aligned mode matching filename stems across the directories form
    simple/complex pairs and every stem must be matched.
    """
    simple = _load_labeled_dir(Path(simple_dir), "simple")
    complex_ = _load_labeled_dir(Path(complex_dir), "complex")
    if aligned:
        orphans = sorted(set(simple) ^ set(complex_))
        if orphans:
            raise ValueError(f"aligned corpora have unmatched files: {', '.join(orphans)}")
    stems = {doc.id: stem for m in (simple, complex_) for stem, doc in m.items()}
    docs = [simple[k] for k in sorted(simple)] + [complex_[k] for k in sorted(complex_)]
    key = (lambda d: stems[d.id]) if aligned else None
    return dataset_from_documents(docs, graded, connectives, pair_key=key)


def corpus_stats(docs: Sequence[Document]) -> CorpusStats:
    """Text, word, and sentence averages; words exclude punctuation."""
    if not docs:
        raise ValueError("at least one text required")
    n_words = sum(d.word_count() for d in docs)
    n_sentences = sum(len(d.sentences) for d in docs)
    return CorpusStats(
        n_texts=len(docs),
        mean_words_per_text=n_words / len(docs),
        mean_words_per_sentence=n_words / n_sentences,
    )


def split_train_valid(
    dataset: LabeledDataset, valid_fraction: float = 0.10, seed: int = 0
) -> tuple[LabeledDataset, LabeledDataset]:
    """Deterministic stratified split that never separates a pair.

    Units are pair groups (singletons for unpaired documents); groups are
    assigned per label class so each side keeps roughly the overall class
    balance.
    """
    if not 0.0 < valid_fraction < 0.5:
        raise ValueError("valid_fraction must be in (0, 0.5)")
    n = len(dataset)
    if n < 10:
        raise ValueError("need at least 10 documents to split")

    groups: dict[str, list[int]] = {}
    for i, pid in enumerate(dataset.pair_ids):
        key = pid if pid is not None else f"\x00single:{dataset.doc_ids[i]}"
        groups.setdefault(key, []).append(i)

    rng = np.random.default_rng(seed)
    by_label: dict[int, list[list[int]]] = {0: [], 1: []}
    for key in sorted(groups):
        members = groups[key]
        label = int(round(float(np.mean(dataset.y[members]))))
        by_label[label].append(members)

    valid_idx: list[int] = []
    train_idx: list[int] = []
    for label in (0, 1):
        cohort = by_label[label]
        if not cohort:
            continue
        order = rng.permutation(len(cohort))
        class_size = sum(len(g) for g in cohort)
        target = valid_fraction * class_size
        taken = 0
        for gi in order:
            members = cohort[gi]
            if taken < target:
                valid_idx.extend(members)
                taken += len(members)
            else:
                train_idx.extend(members)
    if not valid_idx or not train_idx:
        raise ValueError("split leaves one side empty; adjust valid_fraction")
    train_idx.sort()
    valid_idx.sort()
    return dataset.subset(train_idx), dataset.subset(valid_idx)


# ---------------------------------------------------------------------------
# TSV persistence
# ---------------------------------------------------------------------------

_HEADER = ("doc_id", "label", "pair_id") + FEATURE_NAMES


def save_dataset(dataset: LabeledDataset, path: str | Path) -> None:
    Path(path).write_text(dumps_dataset(dataset), encoding="utf-8")


def dumps_dataset(dataset: LabeledDataset) -> str:
    lines = ["\t".join(_HEADER)]
    for i, doc_id in enumerate(dataset.doc_ids):
        row = [doc_id, LABELS[int(dataset.y[i])], dataset.pair_ids[i] or ""]
        row.extend(repr(float(v)) for v in dataset.X[i])
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n"


def load_dataset(source: str | Path | TextIO) -> LabeledDataset:
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty dataset file")
    header = tuple(lines[0].split("\t"))
    if header != _HEADER:
        raise ValueError("unexpected dataset header")
    ids: list[str] = []
    labels: list[int] = []
    pairs: list[str | None] = []
    rows: list[list[float]] = []
    for lineno, line in enumerate(lines[1:], start=2):
        cols = line.split("\t")
        if len(cols) != len(_HEADER):
            raise ValueError(f"line {lineno}: expected {len(_HEADER)} columns")
        if cols[1] not in LABELS:
            raise ValueError(f"line {lineno}: unknown label {cols[1]!r}")
        ids.append(cols[0])
        labels.append(LABELS.index(cols[1]))
        pairs.append(cols[2] or None)
        try:
            rows.append([float(v) for v in cols[3:]])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    X = np.array(rows, dtype=float) if rows else np.empty((0, N_FEATURES))
    return LabeledDataset(tuple(ids), X, np.array(labels, dtype=int), tuple(pairs))
