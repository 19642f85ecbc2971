"""Versioned JSON model files.

Floats are written as shortest round-trip decimals (Python's ``repr``), which
parse back to the identical binary64 value, so a save/load cycle is bitwise
lossless. The document layout is pinned by ``model_schema.json``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .engine import MODEL_KINDS, ArtState
from .fuzzy import FuzzyCategory
from .errors import ConfigError, ModelError, SchemaError, VersionError
from .preprocess import NormalizationRanges
from .supervised import SfamState
from .topology import TopoModule, TopoParams, TopoState

# imported for their registration side effect
from . import geometric, probabilistic  # noqa: F401

__all__ = ["FORMAT_VERSION", "ModelFile", "save", "load", "load_model_file", "to_document", "from_document"]

FORMAT_VERSION = 1


@dataclass
class ModelFile:
    state: ArtState | TopoState | SfamState
    ranges: NormalizationRanges | None = None
    label_names: list[str] = field(default_factory=list)


@lru_cache(maxsize=1)
def model_schema() -> dict:
    text = resources.files("artkit").joinpath("model_schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def _encode_value(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def _encode_categories(model, categories) -> list[dict]:
    out = []
    for c in categories:
        rec = {"n": int(c.n)}
        rec.update({k: _encode_value(v) for k, v in model.category_arrays(c).items()})
        out.append(rec)
    return out


def _fuzzy_records(categories) -> list[dict]:
    return [{"n": int(c.n), "w": c.w.tolist()} for c in categories]


def _encode_module(m: TopoModule) -> dict:
    return {
        "rho": m.rho,
        "categories": _fuzzy_records(m.categories),
        "permanent": list(m.permanent),
        "edges": [list(e) for e in sorted(m.edges)],
        "clock": m.clock,
        "removed_count": m.removed_count,
    }


def to_document(mf: ModelFile) -> dict:
    state = mf.state
    doc = {"format_version": FORMAT_VERSION}
    inner = state.inner if isinstance(state, SfamState) else state
    if isinstance(inner, TopoState):
        doc.update(
            model_kind=inner.kind,
            hyperparameters={k: _encode_value(v) for k, v in vars(inner.params).items()},
            input_dim=inner.dim,
            complement_coded=True,
            n_presented=inner.n_presented,
            categories=[],
            topology={"a": _encode_module(inner.a), "b": _encode_module(inner.b)},
        )
    else:
        doc.update(
            model_kind=inner.kind,
            hyperparameters={k: _encode_value(v) for k, v in inner.model.params().items()},
            input_dim=inner.dim,
            complement_coded=inner.complement,
            n_presented=inner.n_presented,
            categories=_encode_categories(inner.model, inner.categories),
        )
        if inner.cluster_map is not None:
            doc["cluster_map"] = list(inner.cluster_map)
    if isinstance(state, SfamState):
        doc["map_field"] = {"epsilon": state.epsilon, "classes": list(state.class_map)}
    doc["normalization"] = (
        None if mf.ranges is None else {"mins": list(mf.ranges.mins), "maxs": list(mf.ranges.maxs)}
    )
    doc["label_names"] = list(mf.label_names)
    return doc


def _decode_module(rec: dict) -> TopoModule:
    return TopoModule(
        rho=rec["rho"],
        categories=[FuzzyCategory(np.asarray(c["w"], dtype=np.float64), c["n"]) for c in rec["categories"]],
        permanent=list(rec["permanent"]),
        edges={tuple(e) for e in rec["edges"]},
        clock=rec["clock"],
        removed_count=rec["removed_count"],
    )


def _check_version(doc) -> None:
    if not isinstance(doc, dict):
        raise SchemaError("model file must hold a JSON object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise VersionError(f"unsupported format_version {version!r} (expected {FORMAT_VERSION})")
    unknown = set(doc) - set(model_schema()["properties"])
    if unknown:
        raise VersionError(f"unknown fields for format version {FORMAT_VERSION}: {sorted(unknown)}")


def from_document(doc: dict) -> ModelFile:
    _check_version(doc)
    try:
        jsonschema.validate(doc, model_schema())
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"invalid model file: {exc.message}") from None

    kind = doc["model_kind"]
    try:
        if kind == "topoart":
            if "topology" not in doc:
                raise SchemaError("topoart model without topology")
            params = TopoParams(**doc["hyperparameters"])
            state = TopoState(
                params,
                doc["input_dim"],
                a=_decode_module(doc["topology"]["a"]),
                b=_decode_module(doc["topology"]["b"]),
                n_presented=doc["n_presented"],
            )
        else:
            model = MODEL_KINDS[kind](**doc["hyperparameters"])
            if model.complement_coding != doc["complement_coded"]:
                raise SchemaError("complement flag disagrees with the model kind")
            state = ArtState(
                model,
                doc["input_dim"],
                categories=[model.category_from_arrays(c, c["n"]) for c in doc["categories"]],
                cluster_map=doc.get("cluster_map"),
                n_presented=doc["n_presented"],
            )
            if state.cluster_map is not None and len(state.cluster_map) != len(state.categories):
                raise SchemaError("cluster_map length differs from category count")
        if "map_field" in doc:
            mf = doc["map_field"]
            state = SfamState(state, class_map=list(mf["classes"]), epsilon=mf["epsilon"])
            if len(state.class_map) != len(state.inner.categories):
                raise SchemaError("map field length differs from category count")
    except (TypeError, KeyError, ConfigError) as exc:
        raise SchemaError(f"invalid model file: {exc}") from None

    norm = doc["normalization"]
    ranges = None if norm is None else NormalizationRanges(tuple(norm["mins"]), tuple(norm["maxs"]))
    return ModelFile(state, ranges, list(doc["label_names"]))


def save(state, path, ranges: NormalizationRanges | None = None, label_names=()) -> None:
    """Write ``state`` (plus preprocessing metadata) as a UTF-8 JSON model file."""
    doc = to_document(ModelFile(state, ranges, list(label_names)))
    text = json.dumps(doc, indent=1, allow_nan=False, ensure_ascii=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def load_model_file(path) -> ModelFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelError(f"cannot read model file: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"model file is not valid JSON (truncated?): {exc}") from None
    return from_document(doc)


def load(path):
    """Load just the state stored in a model file."""
    return load_model_file(path).state
