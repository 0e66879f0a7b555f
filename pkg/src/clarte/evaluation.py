"""Best-worst-scaling designs and aggregation, reliability statistics,
rank correlations, and the correlation report table.

Score conventions follow the published tables: BWS scores live in
[-100, 100], split-half reliability and report correlations are stated on
a x100 scale.
"""

from __future__ import annotations

import json
import warnings as _warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np


@dataclass(frozen=True)
class BwsTuple:
    tuple_id: str
    members: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.members)) != len(self.members):
            raise ValueError(f"tuple {self.tuple_id} has duplicate members")
        if len(self.members) < 2:
            raise ValueError(f"tuple {self.tuple_id} needs at least 2 members")


@dataclass(frozen=True)
class BwsDesign:
    """E = T*e/k tuples of k distinct texts, each text in exactly e tuples,
    each tuple to be judged by a annotators."""

    texts: tuple[str, ...]
    tuples: tuple[BwsTuple, ...]
    assignments: tuple[tuple[str, ...], ...]  # annotator slots per tuple
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        t = len(self.texts)
        e = self.params.get("e")
        k = self.params.get("k")
        a = self.params.get("a")
        if e is not None and k is not None:
            if len(self.tuples) * k != t * e:
                raise ValueError("tuple count does not satisfy E = T*e/k")
            appearances: dict[str, int] = {tid: 0 for tid in self.texts}
            for tup in self.tuples:
                if len(tup.members) != k:
                    raise ValueError(f"tuple {tup.tuple_id} has {len(tup.members)} members, expected {k}")
                for m in tup.members:
                    if m not in appearances:
                        raise ValueError(f"tuple member {m!r} not in design texts")
                    appearances[m] += 1
            bad = {tid: c for tid, c in appearances.items() if c != e}
            if bad:
                raise ValueError(f"appearance counts differ from e={e}: {bad}")
        if len(self.assignments) != len(self.tuples):
            raise ValueError("one assignment list per tuple required")
        if a is not None and any(len(slots) != a for slots in self.assignments):
            raise ValueError(f"every tuple needs exactly {a} annotator slots")

    def members_by_id(self) -> dict[str, tuple[str, ...]]:
        return {t.tuple_id: t.members for t in self.tuples}


@dataclass(frozen=True)
class BwsResponse:
    tuple_id: str
    annotator_id: str
    best: str
    worst: str
    timestamp: float = 0.0

    def __post_init__(self) -> None:
        if self.best == self.worst:
            raise ValueError("best and worst must differ")


@dataclass(frozen=True)
class RatingResponse:
    text_id: str
    rater_id: str
    rating: float
    timestamp: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.rating <= 100.0:
            raise ValueError("rating must be in [0, 100]")


# ---------------------------------------------------------------------------
# Design generation
# ---------------------------------------------------------------------------

def generate_bws_design(text_ids: Sequence[str], e: int, k: int, a: int,
                        seed: int = 0) -> BwsDesign:
    """Randomized balanced design by greedy dealing plus swap repair.

    Repair swaps members between tuples until no tuple holds duplicates;
    swaps never change per-text appearance counts, so the exact-count
    invariant holds by construction.
    """
    text_ids = list(text_ids)
    t = len(text_ids)
    if len(set(text_ids)) != t:
        raise ValueError("duplicate text ids")
    if e < 1:
        raise ValueError("e must be at least 1")
    if k < 2 or a < 1:
        raise ValueError("k must be >= 2 and a >= 1")
    if k > t:
        raise ValueError(f"infeasible: k={k} exceeds {t} texts")
    if (t * e) % k != 0:
        raise ValueError(f"T*e = {t}*{e} = {t * e} is not divisible by k = {k}")
    n_tuples = t * e // k

    rng = np.random.default_rng(seed)
    slots = [tid for tid in text_ids for _ in range(e)]
    order = rng.permutation(len(slots))
    dealt = [slots[i] for i in order]
    groups = [dealt[i * k:(i + 1) * k] for i in range(n_tuples)]

    def first_dup(group: list[str]) -> int | None:
        seen: set[str] = set()
        for pos, m in enumerate(group):
            if m in seen:
                return pos
            seen.add(m)
        return None

    for _ in range(100 * len(slots) + 100):
        dup_at = None
        for gi, group in enumerate(groups):
            pos = first_dup(group)
            if pos is not None:
                dup_at = (gi, pos)
                break
        if dup_at is None:
            break
        gi, pos = dup_at
        dup_id = groups[gi][pos]
        swapped = False
        for gj in rng.permutation(n_tuples):
            if gj == gi:
                continue
            other = groups[gj]
            if dup_id in other:
                continue
            for pj, m in enumerate(other):
                if m not in groups[gi]:
                    groups[gi][pos], other[pj] = m, dup_id
                    swapped = True
                    break
            if swapped:
                break
        if not swapped:
            raise ValueError("design repair failed; e too large relative to T")
    else:
        raise ValueError("design repair did not converge")

    width = max(4, len(str(n_tuples)))
    tuples = tuple(
        BwsTuple(tuple_id=f"t{i:0{width}d}", members=tuple(group))
        for i, group in enumerate(groups)
    )
    assignments = tuple(
        tuple(f"slot-{j}" for j in range(a)) for _ in range(n_tuples)
    )
    return BwsDesign(
        texts=tuple(text_ids),
        tuples=tuples,
        assignments=assignments,
        params={"T": t, "e": e, "k": k, "a": a, "seed": seed},
    )


# ---------------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------------

def _members_map(design) -> Mapping[str, Sequence[str]]:
    if isinstance(design, BwsDesign):
        return design.members_by_id()
    return design


def bws_scores(responses: Iterable[BwsResponse], design) -> dict[str, float]:
    """score(i) = best%(i) - worst%(i) over the judgments containing i.

    ``design`` supplies tuple membership (a BwsDesign or a mapping
    tuple_id -> member ids); texts never judged are absent from the result.
    """
    members = _members_map(design)
    seen: dict[str, int] = {}
    best: dict[str, int] = {}
    worst: dict[str, int] = {}
    for r in responses:
        if r.tuple_id not in members:
            raise ValueError(f"response references unknown tuple {r.tuple_id!r}")
        tuple_members = members[r.tuple_id]
        if r.best not in tuple_members or r.worst not in tuple_members:
            raise ValueError(
                f"response on {r.tuple_id} chooses texts outside the tuple"
            )
        for m in tuple_members:
            seen[m] = seen.get(m, 0) + 1
        best[r.best] = best.get(r.best, 0) + 1
        worst[r.worst] = worst.get(r.worst, 0) + 1
    return {
        m: 100.0 * best.get(m, 0) / n - 100.0 * worst.get(m, 0) / n
        for m, n in seen.items()
    }


def _default_partition(rng: np.random.Generator, n: int) -> np.ndarray:
    half = n // 2 + (int(rng.integers(2)) if n % 2 else 0)
    mask = np.zeros(n, dtype=bool)
    mask[rng.permutation(n)[:half]] = True
    return mask


def split_half_reliability(
    responses: Sequence[BwsResponse],
    design,
    iterations: int = 1000,
    seed: int = 0,
    partitioner: Callable[[np.random.Generator, int], np.ndarray] | None = None,
) -> float:
    """Mean Spearman correlation between scores from two random halves of
    the responses, over ``iterations`` draws, on a x100 scale.

    Iterations whose halves share fewer than 3 texts (or produce a
    constant score vector) are skipped with a warning; all-skipped is an
    error.  ``partitioner`` exists so tests can force a specific split.
    """
    responses = list(responses)
    members = _members_map(design)
    n = len(responses)
    if n < 2:
        raise ValueError("need at least 2 responses")
    n_texts = len({m for r in responses for m in members[r.tuple_id]})
    if n_texts and n * 1.0 / n_texts < 2.0:
        _warnings.warn("fewer than 2 responses per text on average; "
                       "reliability will be noisy")
    rng = np.random.default_rng(seed)
    partition = partitioner or _default_partition
    values = []
    skipped = 0
    for _ in range(iterations):
        mask = partition(rng, n)
        half_a = [responses[i] for i in np.flatnonzero(mask)]
        half_b = [responses[i] for i in np.flatnonzero(~mask)]
        if not half_a or not half_b:
            skipped += 1
            continue
        scores_a = bws_scores(half_a, members)
        scores_b = bws_scores(half_b, members)
        shared = sorted(set(scores_a) & set(scores_b))
        if len(shared) < 3:
            skipped += 1
            continue
        xa = np.array([scores_a[m] for m in shared])
        xb = np.array([scores_b[m] for m in shared])
        if np.all(xa == xa[0]) or np.all(xb == xb[0]):
            skipped += 1
            continue
        values.append(spearman(xa, xb))
    if skipped:
        _warnings.warn(f"{skipped} of {iterations} iterations skipped "
                       "(too few shared texts or constant scores)")
    if not values:
        raise ValueError("every iteration was skipped; not enough overlap")
    return 100.0 * float(np.mean(values))


# ---------------------------------------------------------------------------
# Reliability and correlation statistics
# ---------------------------------------------------------------------------

def icc2(ratings) -> float:
    """Two-way random effects, absolute agreement, single rater.

    ``ratings`` is a complete n_targets x k_raters matrix; the value is
    (MSR - MSE) / (MSR + (k-1) MSE + k (MSC - MSE) / n), not clamped.
    """
    x = np.asarray(ratings, dtype=float)
    if x.ndim != 2:
        raise ValueError("ratings must be a 2-D matrix")
    n, k = x.shape
    if n < 2 or k < 2:
        raise ValueError("need at least 2 targets and 2 raters")
    if not np.isfinite(x).all():
        raise ValueError("missing or non-finite cell; complete matrix required")
    grand = x.mean()
    if np.allclose(x, grand):
        raise ValueError("degenerate ratings: zero total variance")
    row_means = x.mean(axis=1)
    col_means = x.mean(axis=0)
    ss_rows = k * ((row_means - grand) ** 2).sum()
    ss_cols = n * ((col_means - grand) ** 2).sum()
    ss_total = ((x - grand) ** 2).sum()
    ss_err = ss_total - ss_rows - ss_cols
    msr = ss_rows / (n - 1)
    msc = ss_cols / (k - 1)
    mse = ss_err / ((n - 1) * (k - 1))
    return float((msr - mse) / (msr + (k - 1) * mse + k * (msc - mse) / n))


def _average_ranks(v: np.ndarray) -> np.ndarray:
    order = np.argsort(v, kind="stable")
    ranks = np.empty(len(v), dtype=float)
    sorted_v = v[order]
    i = 0
    n = len(v)
    while i < n:
        j = i
        while j + 1 < n and sorted_v[j + 1] == sorted_v[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(x, y) -> float:
    """Pearson correlation of average-ties ranks."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-D of equal length")
    if len(x) < 3:
        raise ValueError("need at least 3 observations")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise ValueError("undefined correlation for a constant vector")
    rx = _average_ranks(x)
    ry = _average_ranks(y)
    rx -= rx.mean()
    ry -= ry.mean()
    return float((rx @ ry) / np.sqrt((rx @ rx) * (ry @ ry)))


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CorrelationReport:
    rows: tuple[tuple[str, float], ...]  # (scorer name, rho x100)

    def to_tsv(self) -> str:
        lines = ["scorer\trho_x100"]
        lines.extend(f"{name}\t{value:.2f}" for name, value in self.rows)
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        width = max(len("scorer"), *(len(n) for n, _ in self.rows)) if self.rows else 6
        lines = [f"{'scorer':<{width}}  {'rho':>8}"]
        lines.extend(f"{name:<{width}}  {value:>8.2f}" for name, value in self.rows)
        return "\n".join(lines) + "\n"


def correlation_report(scores_by_name: Mapping[str, Sequence[float]],
                       human_scores: Sequence[float]) -> CorrelationReport:
    """Spearman rho x100 of each scorer against the human judgments, in the
    given order."""
    rows = []
    for name, scores in scores_by_name.items():
        rows.append((name, 100.0 * spearman(scores, human_scores)))
    return CorrelationReport(rows=tuple(rows))


# ---------------------------------------------------------------------------
# JSONL persistence
# ---------------------------------------------------------------------------

def design_to_jsonl(design: BwsDesign) -> str:
    lines = [json.dumps({"record": "design", **design.params}, sort_keys=True)]
    for tup, slots in zip(design.tuples, design.assignments):
        lines.append(json.dumps(
            {"record": "tuple", "tuple_id": tup.tuple_id,
             "members": list(tup.members), "slots": list(slots)},
            sort_keys=True))
    return "\n".join(lines) + "\n"


def design_from_jsonl(text: str) -> BwsDesign:
    header: dict | None = None
    tuples: list[BwsTuple] = []
    assignments: list[tuple[str, ...]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        rec = json.loads(line)
        if rec.get("record") == "design":
            header = rec
        elif rec.get("record") == "tuple":
            tuples.append(BwsTuple(rec["tuple_id"], tuple(rec["members"])))
            assignments.append(tuple(rec["slots"]))
        else:
            raise ValueError(f"line {lineno}: unknown record type")
    if header is None:
        raise ValueError("missing design header record")
    texts = sorted({m for t in tuples for m in t.members})
    params = {key: header[key] for key in ("T", "e", "k", "a", "seed") if key in header}
    return BwsDesign(tuple(texts), tuple(tuples), tuple(assignments), params)


def responses_to_jsonl(responses: Iterable[BwsResponse]) -> str:
    lines = [
        json.dumps(
            {"tuple_id": r.tuple_id, "annotator_id": r.annotator_id,
             "best": r.best, "worst": r.worst, "timestamp": r.timestamp},
            sort_keys=True)
        for r in responses
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def responses_from_jsonl(text: str) -> list[BwsResponse]:
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            out.append(BwsResponse(
                tuple_id=rec["tuple_id"], annotator_id=rec["annotator_id"],
                best=rec["best"], worst=rec["worst"],
                timestamp=rec.get("timestamp", 0.0)))
        except (KeyError, ValueError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return out
