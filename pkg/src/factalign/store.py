"""File-backed workspace: one JSON file per record, grouped by kind.

The layout is deliberately plain so a workspace can live in version control
and be inspected with nothing but a text editor:

    workspace.json            schema version + adjustable settings
    documents/<id>.json
    annotators/<id>.json
    guidelines/<id>.json
    annotations/<id>.json
    rounds/<id>.json
    golds/<id>.json
    cache/embeddings.jsonl    content-addressed vectors

Writes go through a temp file and an atomic rename, so a record is either
fully stored or untouched. References are checked at write time; deletions
are not reference-counted, a dangling id surfaces as IntegrityViolation when
the referencing record is read back.
"""

from __future__ import annotations

import json
import os
import tempfile
import urllib.parse
from typing import Any, Callable

from .calibration import GoldMatching, decode_gold_matching, encode_gold_matching
from .embedding import EmbeddingCache
from .errors import IntegrityViolation, StorageFailure, UnknownRecord, UnknownRound
from .model import (
    Annotation,
    AnnotationRound,
    Annotator,
    Document,
    GuidelineVersion,
    decode_annotation,
    decode_annotator,
    decode_document,
    decode_guideline,
    decode_round,
    encode_annotation,
    encode_annotator,
    encode_document,
    encode_guideline,
    encode_round,
)

SCHEMA_VERSION = 1

_KINDS: dict[str, tuple[str, Callable[[Any], dict], Callable[[dict], Any]]] = {
    "document": ("documents", encode_document, decode_document),
    "annotator": ("annotators", encode_annotator, decode_annotator),
    "guideline": ("guidelines", encode_guideline, decode_guideline),
    "annotation": ("annotations", encode_annotation, decode_annotation),
    "round": ("rounds", encode_round, decode_round),
    "gold": ("golds", encode_gold_matching, decode_gold_matching),
}

_TYPE_TO_KIND = {
    Document: "document",
    Annotator: "annotator",
    GuidelineVersion: "guideline",
    Annotation: "annotation",
    AnnotationRound: "round",
    GoldMatching: "gold",
}


RECORD_KINDS = tuple(_KINDS)


def _record_id(record: Any) -> str:
    if isinstance(record, GoldMatching):
        return f"{record.annotation_a_id}__{record.annotation_b_id}"
    return record.id


def record_id(record: Any) -> str:
    """The id a record is stored under (golds combine both annotation ids)."""
    if type(record) not in _TYPE_TO_KIND:
        raise TypeError(f"not a storable record: {type(record).__name__}")
    return _record_id(record)


def encode_record(kind: str, record: Any) -> dict:
    if kind not in _KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    return _KINDS[kind][1](record)


def decode_record(kind: str, payload: dict) -> Any:
    if kind not in _KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    return _KINDS[kind][2](payload)


class Workspace:
    def __init__(self, root: str | os.PathLike[str]):
        self.root = os.fspath(root)
        self._cache: EmbeddingCache | None = None
        try:
            os.makedirs(self.root, exist_ok=True)
            for directory, _, _ in _KINDS.values():
                os.makedirs(os.path.join(self.root, directory), exist_ok=True)
            os.makedirs(os.path.join(self.root, "cache"), exist_ok=True)
        except OSError as exc:
            raise StorageFailure(f"cannot create workspace at {self.root}: {exc}") from exc
        meta_path = self._meta_path()
        if os.path.exists(meta_path):
            meta = self._read_json(meta_path)
            version = meta.get("schema_version")
            if version != SCHEMA_VERSION:
                raise StorageFailure(
                    f"workspace schema version {version} unsupported "
                    f"(engine speaks {SCHEMA_VERSION})"
                )
        else:
            self._write_json(meta_path, {"schema_version": SCHEMA_VERSION, "settings": {}})

    # -- paths and low-level IO ------------------------------------------

    def _meta_path(self) -> str:
        return os.path.join(self.root, "workspace.json")

    def _record_path(self, kind: str, record_id: str) -> str:
        directory = _KINDS[kind][0]
        filename = urllib.parse.quote(record_id, safe="") + ".json"
        return os.path.join(self.root, directory, filename)

    def _read_json(self, path: str) -> dict:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                return json.load(handle)
        except (OSError, json.JSONDecodeError) as exc:
            raise StorageFailure(f"cannot read {path}: {exc}") from exc

    def _write_json(self, path: str, payload: dict) -> None:
        directory = os.path.dirname(path)
        try:
            fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as handle:
                    json.dump(payload, handle, ensure_ascii=False, sort_keys=True, indent=2)
                    handle.write("\n")
                os.replace(tmp, path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise
        except OSError as exc:
            raise StorageFailure(f"cannot write {path}: {exc}") from exc

    # -- core API ---------------------------------------------------------

    def put(self, record: Any) -> str:
        kind = _TYPE_TO_KIND.get(type(record))
        if kind is None:
            raise TypeError(f"cannot store records of type {type(record).__name__}")
        self._check_references(kind, record)
        record_id = _record_id(record)
        _, encode, _ = _KINDS[kind]
        self._write_json(self._record_path(kind, record_id), encode(record))
        return record_id

    def get(self, kind: str, record_id: str) -> Any | None:
        if kind not in _KINDS:
            raise ValueError(f"unknown kind {kind!r}")
        path = self._record_path(kind, record_id)
        if not os.path.exists(path):
            return None
        _, _, decode = _KINDS[kind]
        return decode(self._read_json(path))

    def delete(self, kind: str, record_id: str) -> bool:
        if kind not in _KINDS:
            raise ValueError(f"unknown kind {kind!r}")
        path = self._record_path(kind, record_id)
        if not os.path.exists(path):
            return False
        try:
            os.unlink(path)
        except OSError as exc:
            raise StorageFailure(f"cannot delete {path}: {exc}") from exc
        return True

    def list_ids(self, kind: str) -> list[str]:
        if kind not in _KINDS:
            raise ValueError(f"unknown kind {kind!r}")
        directory = os.path.join(self.root, _KINDS[kind][0])
        try:
            names = os.listdir(directory)
        except OSError as exc:
            raise StorageFailure(f"cannot list {directory}: {exc}") from exc
        ids = [
            urllib.parse.unquote(name[: -len(".json")])
            for name in names
            if name.endswith(".json")
        ]
        return sorted(ids)

    def list_records(self, kind: str) -> list[Any]:
        return [self.get(kind, record_id) for record_id in self.list_ids(kind)]

    def require(self, kind: str, record_id: str) -> Any:
        """Like get, but a missing id is an error instead of None."""
        record = self.get(kind, record_id)
        if record is None:
            raise UnknownRecord(f"no {kind} {record_id!r}")
        return record

    def list_round_annotations(self, round_id: str) -> list[Annotation]:
        """All annotations of a round, sorted by annotator id.

        A round member that no longer resolves is a broken workspace, not an
        empty result.
        """
        rnd = self.get("round", round_id)
        if rnd is None:
            raise UnknownRound(f"no round {round_id!r}")
        annotations = []
        for ann_id in rnd.annotation_ids:
            record = self.get("annotation", ann_id)
            if record is None:
                raise IntegrityViolation(
                    f"round {round_id!r} references missing annotation {ann_id!r}"
                )
            annotations.append(record)
        annotations.sort(key=lambda a: (a.annotator_id, a.id))
        return annotations

    # -- settings ---------------------------------------------------------

    def get_setting(self, key: str, default: Any = None) -> Any:
        meta = self._read_json(self._meta_path())
        return meta.get("settings", {}).get(key, default)

    def set_setting(self, key: str, value: Any) -> None:
        meta = self._read_json(self._meta_path())
        meta.setdefault("settings", {})[key] = value
        self._write_json(self._meta_path(), meta)

    # -- embedding cache ----------------------------------------------------

    @property
    def cache(self) -> EmbeddingCache:
        if self._cache is None:
            self._cache = EmbeddingCache(
                os.path.join(self.root, "cache", "embeddings.jsonl")
            )
        return self._cache

    # -- referential integrity ---------------------------------------------

    def _require(self, kind: str, record_id: str, context: str) -> Any:
        record = self.get(kind, record_id)
        if record is None:
            raise IntegrityViolation(f"{context} references unknown {kind} {record_id!r}")
        return record

    def _check_references(self, kind: str, record: Any) -> None:
        if kind == "annotation":
            context = f"annotation {record.id!r}"
            self._require("document", record.document_id, context)
            self._require("annotator", record.annotator_id, context)
            self._require("guideline", record.guideline_version_id, context)
        elif kind == "round":
            context = f"round {record.id!r}"
            self._require("guideline", record.guideline_version_id, context)
            for ann_id in record.annotation_ids:
                self._require("annotation", ann_id, context)
        elif kind == "gold":
            context = f"gold matching {_record_id(record)!r}"
            ann_a = self._require("annotation", record.annotation_a_id, context)
            ann_b = self._require("annotation", record.annotation_b_id, context)
            for i, j in record.pairs:
                if i >= len(ann_a.facts) or j >= len(ann_b.facts):
                    raise IntegrityViolation(
                        f"{context} pair ({i}, {j}) exceeds fact counts "
                        f"({len(ann_a.facts)}, {len(ann_b.facts)})"
                    )
