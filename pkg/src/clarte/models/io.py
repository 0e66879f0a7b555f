"""Versioned, checksummed JSON persistence for trained models.

The body is serialized with sorted keys and default float repr, so saving
the same model always produces the same bytes; the checksum covers the
body serialization exactly.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .base import ScoringModel, Standardizer

MODEL_FORMAT = "clarte-model"
MODEL_VERSION = 1


class ModelVersionError(ValueError):
    """File written by an unknown (newer) format version."""


class ModelCorruptionError(ValueError):
    """File is truncated, malformed, or fails its checksum."""


def _body(model: ScoringModel) -> dict:
    return {
        "kind": model.kind,
        "standardizer": {
            "mean": model.standardizer.mean.tolist(),
            "std": model.standardizer.std.tolist(),
            "warnings": list(model.standardizer.warnings),
        },
        "calibration": list(model.calibration) if model.calibration else None,
        "params": model.params,
        "metadata": model.metadata,
    }


def _canonical(body: dict) -> str:
    return json.dumps(body, sort_keys=True, ensure_ascii=False)


def dumps_model(model: ScoringModel) -> str:
    body = _body(model)
    canonical = _canonical(body)
    envelope = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "checksum": hashlib.sha256(canonical.encode("utf-8")).hexdigest(),
        "body": body,
    }
    return json.dumps(envelope, sort_keys=True, ensure_ascii=False) + "\n"


def save_model(model: ScoringModel, path: str | Path) -> None:
    Path(path).write_text(dumps_model(model), encoding="utf-8")


def loads_model(text: str) -> ScoringModel:
    try:
        envelope = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelCorruptionError(f"not a valid model file: {exc}") from None
    if not isinstance(envelope, dict) or envelope.get("format") != MODEL_FORMAT:
        raise ModelCorruptionError("not a model file")
    version = envelope.get("version")
    if version != MODEL_VERSION:
        raise ModelVersionError(
            f"file version {version!r} not supported (expected {MODEL_VERSION})"
        )
    body = envelope.get("body")
    if not isinstance(body, dict):
        raise ModelCorruptionError("missing body")
    digest = hashlib.sha256(_canonical(body).encode("utf-8")).hexdigest()
    if digest != envelope.get("checksum"):
        raise ModelCorruptionError("checksum mismatch")
    std = body["standardizer"]
    calibration = body["calibration"]
    return ScoringModel(
        kind=body["kind"],
        standardizer=Standardizer(
            mean=np.array(std["mean"], dtype=float),
            std=np.array(std["std"], dtype=float),
            warnings=tuple(std["warnings"]),
        ),
        params=body["params"],
        calibration=tuple(calibration) if calibration else None,
        metadata=body["metadata"],
    )


def load_model(path: str | Path) -> ScoringModel:
    return loads_model(Path(path).read_text(encoding="utf-8"))
