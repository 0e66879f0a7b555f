"""Command-line entry point: one subcommand per pipeline step.

Every run prints machine-readable output (TSV or JSON) on stdout, keeps
diagnostics on stderr, and records a manifest of resolved configuration
plus content hashes of the inputs it read.  All outputs are byte-stable
for fixed inputs and seeds.

Exit codes: 0 success, 1 input or usage error, 2 internal error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import compute_counts, fkgl, gunning_fog, smog
from .corpus import (LabeledDataset, build_dataset, dataset_from_documents,
                     dumps_dataset, load_dataset, split_train_valid)
from .documents import Document
from .evaluation import (bws_scores, correlation_report, design_from_jsonl,
                         design_to_jsonl, generate_bws_design, icc2,
                         responses_from_jsonl, spearman,
                         split_half_reliability)
from .indicators import FEATURE_NAMES, extract_features
from .ingest import attach_trees, load_tree_sidecar, parse_conllu
from .lexicons import (default_connectives, default_graded_lexicon,
                       load_connectives, load_graded_lexicon)
from .models import (TRAINERS, load_model, predict_proba, save_model,
                     validation_accuracy)
from .models.base import proba_matrix
from .synth import generate_continuum, generate_corpus


class CliInputError(Exception):
    """Bad input: wrong flag usage, unreadable file, malformed content."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are input errors, not crashes
        self.print_usage(sys.stderr)
        raise CliInputError(message)


def _fmt(x: float) -> str:
    return repr(float(x))


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


class _Run:
    """Collects resolved config and input hashes for the manifest."""

    def __init__(self, args: argparse.Namespace) -> None:
        self.args = args
        self.inputs: dict[str, str] = {}

    def read_text(self, path: str | Path) -> str:
        p = Path(path)
        try:
            data = p.read_text("utf-8")
        except OSError as exc:
            raise CliInputError(f"cannot read {p}: {exc.strerror}") from None
        self.inputs[str(p)] = _sha256(p)
        return data

    def note_input(self, path: str | Path) -> Path:
        p = Path(path)
        if not p.exists():
            raise CliInputError(f"cannot read {p}: no such file")
        self.inputs[str(p)] = _sha256(p)
        return p

    def manifest(self) -> dict:
        skip = {"config", "quiet", "func"}
        config = {
            k: v for k, v in sorted(vars(self.args).items())
            if k not in skip and not k.startswith("_")
        }
        return {
            "tool": "clarte",
            "version": __version__,
            "subcommand": self.args.subcommand,
            "config": config,
            "inputs": dict(sorted(self.inputs.items())),
        }

    def emit_manifest(self, out_path: Path | None) -> None:
        blob = json.dumps(self.manifest(), sort_keys=True, ensure_ascii=False,
                          indent=2) + "\n"
        if out_path is not None:
            out_path.write_text(blob, "utf-8")
        elif not self.args.quiet:
            sys.stderr.write(blob)


def _diag(args: argparse.Namespace, message: str) -> None:
    if not args.quiet:
        sys.stderr.write(message.rstrip("\n") + "\n")


def _load_documents(run: _Run, conllu_path: str,
                    trees_path: str | None) -> list[Document]:
    text = run.read_text(conllu_path)
    try:
        docs = parse_conllu(text, default_id=Path(conllu_path).stem)
    except ValueError as exc:
        raise CliInputError(f"{conllu_path}: {exc}") from None
    if not docs:
        raise CliInputError(f"{conllu_path}: no sentences found")
    sidecar = trees_path or str(Path(conllu_path).with_suffix(".trees"))
    if Path(sidecar).is_file():
        tree_text = run.read_text(sidecar)
        try:
            trees = load_tree_sidecar(tree_text)
            docs = [attach_trees(doc, trees) for doc in docs]
        except ValueError as exc:
            raise CliInputError(f"{sidecar}: {exc}") from None
    elif trees_path is not None:
        raise CliInputError(f"cannot read {trees_path}: no such file")
    return docs


def _load_lexicons(run: _Run, args: argparse.Namespace):
    try:
        if getattr(args, "graded", None):
            graded = load_graded_lexicon(run.note_input(args.graded))
        else:
            graded = default_graded_lexicon()
        if getattr(args, "connectives", None):
            connectives = load_connectives(run.note_input(args.connectives))
        else:
            connectives = default_connectives()
    except ValueError as exc:
        raise CliInputError(str(exc)) from None
    return graded, connectives


# ---------------------------------------------------------------------------
# feature / baseline subcommands
# ---------------------------------------------------------------------------

def cmd_features(run: _Run, args: argparse.Namespace) -> int:
    docs = _load_documents(run, args.infile, args.trees)
    graded, connectives = _load_lexicons(run, args)
    json_rows = []
    tsv_rows = []
    for doc in docs:
        fv = extract_features(doc, graded, connectives)
        for w in fv.warnings:
            _diag(args, f"warning: {doc.id}: {w}")
        if args.format == "json":
            json_rows.append(
                {"doc_id": doc.id,
                 "features": {n: v for n, v in zip(FEATURE_NAMES, fv.values)},
                 "warnings": list(fv.warnings)})
        else:
            tsv_rows.append(doc.id + "\t"
                            + "\t".join(_fmt(v) for v in fv.values))
    if args.format == "json":
        for row in json_rows:
            sys.stdout.write(json.dumps(row, sort_keys=True,
                                        ensure_ascii=False) + "\n")
    else:
        sys.stdout.write("doc_id\t" + "\t".join(FEATURE_NAMES) + "\n")
        for row in tsv_rows:
            sys.stdout.write(row + "\n")
    run.emit_manifest(None)
    return 0


def cmd_baselines(run: _Run, args: argparse.Namespace) -> int:
    docs = _load_documents(run, args.infile, args.trees)
    sys.stdout.write("doc_id\tfkgl\tsmog\tgunning_fog\n")
    for doc in docs:
        try:
            counts = compute_counts(doc)
        except ValueError as exc:
            raise CliInputError(f"{doc.id}: {exc}") from None
        sys.stdout.write("\t".join([doc.id, _fmt(fkgl(counts)),
                                    _fmt(smog(counts)),
                                    _fmt(gunning_fog(counts))]) + "\n")
    run.emit_manifest(None)
    return 0


# ---------------------------------------------------------------------------
# corpus subcommands
# ---------------------------------------------------------------------------

def cmd_build_corpus(run: _Run, args: argparse.Namespace) -> int:
    graded, connectives = _load_lexicons(run, args)
    for d in (args.simple_dir, args.complex_dir):
        if not Path(d).is_dir():
            raise CliInputError(f"not a directory: {d}")
    try:
        dataset, warnings = build_dataset(
            args.simple_dir, args.complex_dir, aligned=args.aligned,
            graded=graded, connectives=connectives)
    except ValueError as exc:
        raise CliInputError(str(exc)) from None
    for path in sorted(Path(args.simple_dir).glob("*.conllu")):
        run.note_input(path)
    for path in sorted(Path(args.complex_dir).glob("*.conllu")):
        run.note_input(path)
    for w in warnings:
        _diag(args, f"warning: {w}")
    out = Path(args.out)
    out.write_text(dumps_dataset(dataset), "utf-8")
    sys.stdout.write(json.dumps(
        {"out": str(out), "n_docs": len(dataset.doc_ids),
         "n_simple": int((dataset.y == 1).sum()),
         "n_complex": int((dataset.y == 0).sum())},
        sort_keys=True) + "\n")
    run.emit_manifest(out.with_name(out.name + ".manifest.json"))
    return 0


def _continuum_table(docs, clarity, graded, connectives) -> str:
    header = ["doc_id", "clarity", "fkgl", "smog", "gunning_fog"]
    header.extend(FEATURE_NAMES)
    lines = ["\t".join(header)]
    for doc in docs:
        fv = extract_features(doc, graded, connectives)
        counts = compute_counts(doc)
        row = [doc.id, _fmt(clarity[doc.id]), _fmt(fkgl(counts)),
               _fmt(smog(counts)), _fmt(gunning_fog(counts))]
        row.extend(_fmt(v) for v in fv.values)
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n"


def _read_table(text: str, path: str) -> tuple[list[str], list[list[str]]]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise CliInputError(f"{path}: empty table")
    header = lines[0].split("\t")
    rows = []
    for i, ln in enumerate(lines[1:], start=2):
        cells = ln.split("\t")
        if len(cells) != len(header):
            raise CliInputError(f"{path}: line {i}: expected "
                                f"{len(header)} columns, got {len(cells)}")
        rows.append(cells)
    return header, rows


def cmd_synth_corpus(run: _Run, args: argparse.Namespace) -> int:
    graded, connectives = _load_lexicons(run, args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    corpus = generate_corpus(n_simple=args.n_simple, n_complex=args.n_complex,
                             seed=args.seed)
    dataset, warnings = dataset_from_documents(corpus.documents, graded,
                                               connectives)
    for w in warnings:
        _diag(args, f"warning: {w}")
    train_path = out_dir / "train.tsv"
    train_path.write_text(dumps_dataset(dataset), "utf-8")
    result = {"train": str(train_path),
              "n_simple": args.n_simple, "n_complex": args.n_complex}
    if args.continuum > 0:
        cont = generate_continuum(n=args.continuum, seed=args.seed + 1)
        cont_path = out_dir / "continuum.tsv"
        cont_path.write_text(
            _continuum_table(cont.documents, cont.clarity, graded,
                             connectives), "utf-8")
        result["continuum"] = str(cont_path)
        result["n_continuum"] = args.continuum
    sys.stdout.write(json.dumps(result, sort_keys=True) + "\n")
    run.emit_manifest(out_dir / "manifest.json")
    return 0


def cmd_split(run: _Run, args: argparse.Namespace) -> int:
    dataset = _read_dataset(run, args.infile)
    try:
        train, valid = split_train_valid(dataset, args.valid_fraction,
                                         seed=args.seed)
    except ValueError as exc:
        raise CliInputError(str(exc)) from None
    Path(args.out_train).write_text(dumps_dataset(train), "utf-8")
    Path(args.out_valid).write_text(dumps_dataset(valid), "utf-8")
    sys.stdout.write(json.dumps(
        {"train": str(args.out_train), "n_train": len(train.doc_ids),
         "valid": str(args.out_valid), "n_valid": len(valid.doc_ids)},
        sort_keys=True) + "\n")
    run.emit_manifest(Path(args.out_train).with_name(
        Path(args.out_train).name + ".manifest.json"))
    return 0


def _read_dataset(run: _Run, path: str) -> LabeledDataset:
    text = run.read_text(path)
    try:
        return load_dataset(Path(path))
    except ValueError as exc:
        raise CliInputError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# model subcommands
# ---------------------------------------------------------------------------

def _trainer_kwargs(args: argparse.Namespace) -> dict:
    table = {
        "ridge": {"lam": args.lam},
        "linear_svc": {"c": args.c, "epochs": args.epochs, "seed": args.seed},
        "random_forest": {"n_trees": args.n_trees, "max_depth": args.max_depth,
                          "seed": args.seed},
        "mlp": {"hidden": args.hidden, "lr": args.lr, "epochs": args.epochs,
                "seed": args.seed},
    }
    return table[args.model]


def cmd_train(run: _Run, args: argparse.Namespace) -> int:
    train = _read_dataset(run, args.train)
    kwargs = _trainer_kwargs(args)
    if args.model == "mlp" and args.valid:
        kwargs["valid"] = _read_dataset(run, args.valid)
    try:
        model = TRAINERS[args.model](train, **kwargs)
    except ValueError as exc:
        raise CliInputError(str(exc)) from None
    for w in model.standardizer.warnings:
        _diag(args, f"warning: {w}")
    out = Path(args.out)
    save_model(model, out)
    summary = {"kind": model.kind, "out": str(out),
               "train_accuracy": validation_accuracy(model, train)}
    if args.valid:
        valid = _read_dataset(run, args.valid)
        summary["valid_accuracy"] = validation_accuracy(model, valid)
    sys.stdout.write(json.dumps(summary, sort_keys=True) + "\n")
    run.emit_manifest(out.with_name(out.name + ".manifest.json"))
    return 0


def cmd_validate(run: _Run, args: argparse.Namespace) -> int:
    model = _load_model(run, args.model_file)
    data = _read_dataset(run, args.data)
    acc = validation_accuracy(model, data)
    sys.stdout.write(f"accuracy\t{_fmt(acc)}\n")
    run.emit_manifest(None)
    return 0


def _load_model(run: _Run, path: str):
    run.note_input(path)
    from .models.io import ModelCorruptionError, ModelVersionError
    try:
        return load_model(Path(path))
    except (ModelCorruptionError, ModelVersionError, OSError) as exc:
        raise CliInputError(f"{path}: {exc}") from None


def cmd_score(run: _Run, args: argparse.Namespace) -> int:
    model = _load_model(run, args.model_file)
    docs = _load_documents(run, args.infile, args.trees)
    graded, connectives = _load_lexicons(run, args)
    for doc in docs:
        fv = extract_features(doc, graded, connectives)
        for w in fv.warnings:
            _diag(args, f"warning: {doc.id}: {w}")
        score = 100.0 * predict_proba(model, fv)
        sys.stdout.write(f"{doc.id}\t{_fmt(score)}\n")
    run.emit_manifest(None)
    return 0


# ---------------------------------------------------------------------------
# evaluation subcommands
# ---------------------------------------------------------------------------

def cmd_bws_design(run: _Run, args: argparse.Namespace) -> int:
    ids = [ln.strip() for ln in run.read_text(args.texts).splitlines()
           if ln.strip()]
    try:
        design = generate_bws_design(ids, e=args.e, k=args.k, a=args.a,
                                     seed=args.seed)
    except ValueError as exc:
        raise CliInputError(str(exc)) from None
    blob = design_to_jsonl(design)
    if args.out:
        Path(args.out).write_text(blob, "utf-8")
        sys.stdout.write(json.dumps({"out": args.out,
                                     "n_tuples": len(design.tuples)},
                                    sort_keys=True) + "\n")
        run.emit_manifest(Path(args.out).with_name(
            Path(args.out).name + ".manifest.json"))
    else:
        sys.stdout.write(blob)
        run.emit_manifest(None)
    return 0


def _read_design(run: _Run, path: str):
    try:
        return design_from_jsonl(run.read_text(path))
    except ValueError as exc:
        raise CliInputError(f"{path}: {exc}") from None


def _read_responses(run: _Run, path: str):
    try:
        return responses_from_jsonl(run.read_text(path))
    except ValueError as exc:
        raise CliInputError(f"{path}: {exc}") from None


def cmd_bws_score(run: _Run, args: argparse.Namespace) -> int:
    design = _read_design(run, args.design)
    responses = _read_responses(run, args.responses)
    try:
        scores = bws_scores(responses, design)
    except ValueError as exc:
        raise CliInputError(str(exc)) from None
    sys.stdout.write("text_id\tscore\n")
    for tid in sorted(scores):
        sys.stdout.write(f"{tid}\t{_fmt(scores[tid])}\n")
    run.emit_manifest(None)
    return 0


def cmd_shr(run: _Run, args: argparse.Namespace) -> int:
    import warnings as _w
    design = _read_design(run, args.design)
    responses = _read_responses(run, args.responses)
    with _w.catch_warnings(record=True) as caught:
        _w.simplefilter("always")
        try:
            value = split_half_reliability(responses, design,
                                           iterations=args.iterations,
                                           seed=args.seed)
        except ValueError as exc:
            raise CliInputError(str(exc)) from None
    for w in caught:
        _diag(args, f"warning: {w.message}")
    sys.stdout.write(f"shr\t{_fmt(value)}\n")
    run.emit_manifest(None)
    return 0


def cmd_icc(run: _Run, args: argparse.Namespace) -> int:
    rows = []
    for i, ln in enumerate(run.read_text(args.infile).splitlines(), start=1):
        if not ln.strip():
            continue
        try:
            rows.append([float(c) for c in ln.split("\t")])
        except ValueError:
            raise CliInputError(f"{args.infile}: line {i}: "
                                "non-numeric cell") from None
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise CliInputError(f"{args.infile}: ragged matrix")
    try:
        value = icc2(np.array(rows, dtype=float))
    except ValueError as exc:
        raise CliInputError(str(exc)) from None
    sys.stdout.write(f"icc2\t{_fmt(value)}\n")
    run.emit_manifest(None)
    return 0


def _read_column(run: _Run, path: str) -> np.ndarray:
    values = []
    for i, ln in enumerate(run.read_text(path).splitlines(), start=1):
        if not ln.strip():
            continue
        try:
            values.append(float(ln.strip()))
        except ValueError:
            raise CliInputError(f"{path}: line {i}: not a number") from None
    return np.array(values)


def cmd_spearman(run: _Run, args: argparse.Namespace) -> int:
    x = _read_column(run, args.x)
    y = _read_column(run, args.y)
    try:
        value = spearman(x, y)
    except ValueError as exc:
        raise CliInputError(str(exc)) from None
    sys.stdout.write(f"spearman\t{_fmt(value)}\n")
    run.emit_manifest(None)
    return 0


def cmd_report(run: _Run, args: argparse.Namespace) -> int:
    header, rows = _read_table(run.read_text(args.data), args.data)
    col = {name: i for i, name in enumerate(header)}
    if args.human_col not in col:
        raise CliInputError(f"{args.data}: no column {args.human_col!r}")
    try:
        human = [float(r[col[args.human_col]]) for r in rows]
    except ValueError:
        raise CliInputError(f"{args.data}: non-numeric values in "
                            f"{args.human_col!r}") from None
    scores_by_name: dict[str, list[float]] = {}
    missing_features = [n for n in FEATURE_NAMES if n not in col]
    for spec_item in args.model_file or []:
        name, _, path = spec_item.rpartition("=")
        if not name:
            name = Path(path).stem
        if missing_features:
            raise CliInputError(
                f"{args.data}: missing feature columns {missing_features[:3]}"
                " needed for model scoring")
        model = _load_model(run, path)
        X = np.array([[float(r[col[f]]) for f in FEATURE_NAMES] for r in rows])
        scores_by_name[name] = list(100.0 * proba_matrix(model, X))
    for baseline in ("fkgl", "smog", "gunning_fog"):
        if baseline in col:
            scores_by_name[baseline] = [float(r[col[baseline]]) for r in rows]
    if not scores_by_name:
        raise CliInputError("nothing to report: no models given and no "
                            "baseline columns found")
    try:
        report = correlation_report(scores_by_name, human)
    except ValueError as exc:
        raise CliInputError(str(exc)) from None
    sys.stdout.write(report.to_tsv())
    _diag(args, report.to_text())
    if args.out:
        Path(args.out).write_text(report.to_tsv(), "utf-8")
        run.emit_manifest(Path(args.out).with_name(
            Path(args.out).name + ".manifest.json"))
    else:
        run.emit_manifest(None)
    return 0


def cmd_serve(run: _Run, args: argparse.Namespace) -> int:
    import uvicorn
    from .service import create_app
    app = create_app(args.data_dir, static_dir=args.static_dir)
    uvicorn.run(app, host=args.host, port=args.port,
                log_level="warning" if args.quiet else "info")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_lexicon_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graded", metavar="TSV",
                   help="graded lexicon file (default: packaged)")
    p.add_argument("--connectives", metavar="TSV",
                   help="connective lexicon file (default: packaged)")


def _add_doc_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--in", dest="infile", required=True, metavar="CONLLU",
                   help="parsed document (CoNLL-U)")
    p.add_argument("--trees", metavar="FILE",
                   help="constituency sidecar (default: <in>.trees if present)")


def build_parser() -> _Parser:
    parser = _Parser(prog="clarte",
                     description="Reference-less French comprehension "
                                 "scoring toolkit")
    parser.add_argument("--seed", type=int, default=0,
                        help="random seed recorded in all outputs")
    parser.add_argument("--config", metavar="FILE",
                        help="key = value file supplying flag defaults")
    parser.add_argument("--quiet", action="store_true",
                        help="suppress stderr diagnostics")
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")
    sub.required = True

    p = sub.add_parser("features", help="extract the 28 indicators from one document")
    _add_doc_flags(p)
    _add_lexicon_flags(p)
    p.add_argument("--format", choices=("tsv", "json"), default="tsv",
                   help="output format (default tsv)")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("baselines", help="classical readability scores for one document")
    _add_doc_flags(p)
    p.set_defaults(func=cmd_baselines)

    p = sub.add_parser("build-corpus", help="feature dataset from simple/complex directories")
    p.add_argument("--simple-dir", required=True, help="directory of simple .conllu files")
    p.add_argument("--complex-dir", required=True, help="directory of complex .conllu files")
    p.add_argument("--aligned", action="store_true",
                   help="require matching file stems and record pair ids")
    p.add_argument("--out", required=True, help="output dataset TSV")
    _add_lexicon_flags(p)
    p.set_defaults(func=cmd_build_corpus)

    p = sub.add_parser("synth-corpus", help="generate the synthetic corpus and its feature tables")
    p.add_argument("--n-simple", type=int, default=500, help="simple documents (default 500)")
    p.add_argument("--n-complex", type=int, default=500, help="complex documents (default 500)")
    p.add_argument("--continuum", type=int, default=0, metavar="N",
                   help="also generate N graded documents with planted clarity")
    p.add_argument("--out-dir", required=True, help="output directory")
    _add_lexicon_flags(p)
    p.set_defaults(func=cmd_synth_corpus)

    p = sub.add_parser("split", help="pair-aware stratified train/valid split")
    p.add_argument("--in", dest="infile", required=True, help="dataset TSV")
    p.add_argument("--valid-fraction", type=float, default=0.10,
                   help="held-out fraction (default 0.10)")
    p.add_argument("--out-train", required=True, help="output training TSV")
    p.add_argument("--out-valid", required=True, help="output validation TSV")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("train", help="train a scoring model on a dataset")
    p.add_argument("--model", required=True,
                   choices=("ridge", "linear_svc", "random_forest", "mlp"),
                   help="model kind")
    p.add_argument("--train", required=True, help="training dataset TSV")
    p.add_argument("--valid", help="validation dataset TSV (mlp early stop, reporting)")
    p.add_argument("--out", required=True, help="output model file")
    p.add_argument("--lam", type=float, default=1.0, help="ridge penalty (default 1.0)")
    p.add_argument("--c", type=float, default=1.0, help="svc regularization (default 1.0)")
    p.add_argument("--epochs", type=int, default=None,
                   help="svc/mlp epochs (defaults: svc 100, mlp 200)")
    p.add_argument("--lr", type=float, default=0.01, help="mlp learning rate (default 0.01)")
    p.add_argument("--hidden", type=int, default=32, help="mlp hidden width (default 32)")
    p.add_argument("--n-trees", type=int, default=100, help="forest size (default 100)")
    p.add_argument("--max-depth", type=int, default=None,
                   help="forest depth cap (default unlimited)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("validate", help="accuracy of a saved model on a dataset")
    p.add_argument("--model-file", required=True, help="saved model")
    p.add_argument("--data", required=True, help="dataset TSV")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("score", help="comprehension score of one document")
    p.add_argument("--model-file", required=True, help="saved model")
    _add_doc_flags(p)
    _add_lexicon_flags(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("bws-design", help="generate a best-worst annotation design")
    p.add_argument("--texts", required=True, help="file with one text id per line")
    p.add_argument("--e", type=int, required=True, help="tuples per text")
    p.add_argument("--k", type=int, default=3, help="texts per tuple (default 3)")
    p.add_argument("--a", type=int, default=3, help="annotators per tuple (default 3)")
    p.add_argument("--out", help="write JSONL here instead of stdout")
    p.set_defaults(func=cmd_bws_design)

    p = sub.add_parser("bws-score", help="aggregate best-worst responses into scores")
    p.add_argument("--design", required=True, help="design JSONL")
    p.add_argument("--responses", required=True, help="responses JSONL")
    p.set_defaults(func=cmd_bws_score)

    p = sub.add_parser("shr", help="split-half reliability of a response set")
    p.add_argument("--design", required=True, help="design JSONL")
    p.add_argument("--responses", required=True, help="responses JSONL")
    p.add_argument("--iterations", type=int, default=1000,
                   help="random halvings to average (default 1000)")
    p.set_defaults(func=cmd_shr)

    p = sub.add_parser("icc", help="ICC(2,1) of a complete rating matrix")
    p.add_argument("--in", dest="infile", required=True,
                   help="TSV matrix, one target per row, one rater per column")
    p.set_defaults(func=cmd_icc)

    p = sub.add_parser("spearman", help="rank correlation of two numeric columns")
    p.add_argument("--x", required=True, help="file with one number per line")
    p.add_argument("--y", required=True, help="file with one number per line")
    p.set_defaults(func=cmd_spearman)

    p = sub.add_parser("report", help="correlation table of scorers against reference scores")
    p.add_argument("--data", required=True,
                   help="TSV with a reference column, optional baseline "
                        "columns, and the 28 feature columns")
    p.add_argument("--human-col", default="clarity",
                   help="reference score column (default clarity)")
    p.add_argument("--model-file", action="append", metavar="[NAME=]PATH",
                   help="saved model to score with (repeatable)")
    p.add_argument("--out", help="also write the TSV here")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="run the annotation service")
    p.add_argument("--port", type=int, default=8000, help="TCP port (default 8000)")
    p.add_argument("--host", default="127.0.0.1", help="bind address (default 127.0.0.1)")
    p.add_argument("--data-dir", required=True, help="campaign storage directory")
    p.add_argument("--static-dir", help="directory of UI files to serve at /")
    p.set_defaults(func=cmd_serve)

    return parser


def _parse_config_value(raw: str):
    raw = raw.strip()
    if raw.lower() in ("true", "false"):
        return raw.lower() == "true"
    if len(raw) >= 2 and raw[0] == raw[-1] and raw[0] in ("'", '"'):
        return raw[1:-1]
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        pass
    return raw


def load_config_file(path: str) -> dict:
    values: dict = {}
    try:
        text = Path(path).read_text("utf-8")
    except OSError as exc:
        raise CliInputError(f"cannot read {path}: {exc.strerror}") from None
    for i, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliInputError(f"{path}: line {i}: expected key = value")
        key, _, raw = line.partition("=")
        values[key.strip().replace("-", "_")] = _parse_config_value(raw)
    return values


def _apply_config(parser: _Parser, argv: list[str]) -> None:
    if "--config" not in argv:
        return
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        raise CliInputError("--config requires a path")
    config = load_config_file(argv[idx + 1])
    known = {action.dest for action in parser._actions}
    for sub_action in parser._actions:
        if isinstance(sub_action, argparse._SubParsersAction):
            for sub_parser in sub_action.choices.values():
                dests = {a.dest for a in sub_parser._actions}
                known |= dests
                sub_parser.set_defaults(**{k: v for k, v in config.items()
                                           if k in dests})
    unknown = set(config) - known
    if unknown:
        raise CliInputError(f"unknown config keys: {sorted(unknown)}")
    parser.set_defaults(**{k: v for k, v in config.items()
                           if k in {a.dest for a in parser._actions}})


_EPOCH_DEFAULTS = {"linear_svc": 100, "mlp": 200}


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        if getattr(args, "model", None) in _EPOCH_DEFAULTS and args.epochs is None:
            args.epochs = _EPOCH_DEFAULTS[args.model]
        return args.func(_Run(args), args)
    except CliInputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except BrokenPipeError:
        return 0
    except KeyboardInterrupt:
        return 130
    except Exception as exc:  # internal failure: report and exit 2
        sys.stderr.write(f"internal error: {type(exc).__name__}: {exc}\n")
        return 2


def main() -> None:
    raise SystemExit(run(sys.argv[1:]))
