"""Domain types for documents, facts, annotators, annotations, and rounds.

All types are immutable values with canonical JSON encodings. Character
offsets count unicode scalar values (Python string indices), never bytes
or UTF-16 units, so spans mean the same thing in the engine and the web UI.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Iterable

from .errors import DocumentMismatch

ANNOTATOR_KINDS = ("human", "model")

Span = tuple[int, int]


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    language: str = "en"
    source: str = ""


@dataclass(frozen=True)
class Fact:
    """One atomic fact: a statement plus optional span anchors into the source.

    Anchors are half-open (start, end) character spans. They are optional
    because model output frequently lacks reliable offsets; a fact without
    anchors only loses text-highlighting features.
    """

    text: str
    anchors: tuple[Span, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "anchors", tuple((int(s), int(e)) for s, e in self.anchors)
        )


@dataclass(frozen=True)
class Annotator:
    id: str
    kind: str
    label: str = ""

    def __post_init__(self) -> None:
        if self.kind not in ANNOTATOR_KINDS:
            raise ValueError(f"annotator kind must be one of {ANNOTATOR_KINDS}, got {self.kind!r}")


@dataclass(frozen=True)
class GuidelineVersion:
    id: str
    version: int
    body: str
    created_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))


@dataclass(frozen=True)
class Annotation:
    """One annotator's ordered fact list for one document under one guideline.

    Facts keep insertion order and duplicates are preserved: a repeated fact
    is a redundancy signal, not an error.
    """

    id: str
    document_id: str
    annotator_id: str
    guideline_version_id: str
    facts: tuple[Fact, ...] = ()
    created_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))

    def __post_init__(self) -> None:
        object.__setattr__(self, "facts", tuple(self.facts))


@dataclass(frozen=True)
class AnnotationRound:
    id: str
    guideline_version_id: str
    annotation_ids: tuple[str, ...] = ()
    notes: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "annotation_ids", tuple(self.annotation_ids))


@dataclass(frozen=True)
class Violation:
    """One invariant failure found by validation. Violations are data, not errors."""

    fact_index: int
    anchor_index: int | None
    code: str
    message: str


def validate_annotation(annotation: Annotation, document: Document) -> list[Violation]:
    """Check every fact of ``annotation`` against ``document``.

    Returns an empty list iff all fact invariants hold: non-empty fact text
    and every anchor satisfying 0 <= start < end <= len(document.text).
    Deterministic and order-preserving over facts.
    """
    if annotation.document_id != document.id:
        raise DocumentMismatch(
            f"annotation {annotation.id} references document {annotation.document_id}, "
            f"not {document.id}"
        )
    violations: list[Violation] = []
    length = len(document.text)
    for i, fact in enumerate(annotation.facts):
        if not fact.text.strip():
            violations.append(Violation(i, None, "empty_text", "fact text is empty"))
        for j, (start, end) in enumerate(fact.anchors):
            if start == end:
                violations.append(
                    Violation(i, j, "empty_span", f"empty span ({start}, {end})")
                )
            elif start > end:
                violations.append(
                    Violation(i, j, "inverted_span", f"span start {start} after end {end}")
                )
            elif start < 0 or end > length:
                violations.append(
                    Violation(
                        i, j, "out_of_range",
                        f"span ({start}, {end}) out of range for document of length {length}",
                    )
                )
    return violations


# --- canonical JSON codecs ------------------------------------------------
#
# Field names in the encoded form match the type definitions exactly; the
# full format reference lives in docs/formats.md.


def _encode_timestamp(ts: datetime) -> str:
    return ts.isoformat()


def _decode_timestamp(raw: str) -> datetime:
    return datetime.fromisoformat(raw)


def encode_document(doc: Document) -> dict[str, Any]:
    return {"id": doc.id, "text": doc.text, "language": doc.language, "source": doc.source}


def decode_document(data: dict[str, Any]) -> Document:
    return Document(
        id=data["id"],
        text=data["text"],
        language=data.get("language", "en"),
        source=data.get("source", ""),
    )


def encode_fact(fact: Fact) -> dict[str, Any]:
    return {"text": fact.text, "anchors": [[s, e] for s, e in fact.anchors]}


def decode_fact(data: dict[str, Any]) -> Fact:
    return Fact(text=data["text"], anchors=tuple((s, e) for s, e in data.get("anchors", [])))


def encode_annotator(annotator: Annotator) -> dict[str, Any]:
    return {"id": annotator.id, "kind": annotator.kind, "label": annotator.label}


def decode_annotator(data: dict[str, Any]) -> Annotator:
    return Annotator(id=data["id"], kind=data["kind"], label=data.get("label", ""))


def encode_guideline(gv: GuidelineVersion) -> dict[str, Any]:
    return {
        "id": gv.id,
        "version": gv.version,
        "body": gv.body,
        "created_at": _encode_timestamp(gv.created_at),
    }


def decode_guideline(data: dict[str, Any]) -> GuidelineVersion:
    return GuidelineVersion(
        id=data["id"],
        version=int(data["version"]),
        body=data["body"],
        created_at=_decode_timestamp(data["created_at"]),
    )


def encode_annotation(annotation: Annotation) -> dict[str, Any]:
    return {
        "id": annotation.id,
        "document_id": annotation.document_id,
        "annotator_id": annotation.annotator_id,
        "guideline_version_id": annotation.guideline_version_id,
        "facts": [encode_fact(f) for f in annotation.facts],
        "created_at": _encode_timestamp(annotation.created_at),
    }


def decode_annotation(data: dict[str, Any]) -> Annotation:
    return Annotation(
        id=data["id"],
        document_id=data["document_id"],
        annotator_id=data["annotator_id"],
        guideline_version_id=data["guideline_version_id"],
        facts=tuple(decode_fact(f) for f in data.get("facts", [])),
        created_at=_decode_timestamp(data["created_at"]),
    )


def encode_round(rnd: AnnotationRound) -> dict[str, Any]:
    return {
        "id": rnd.id,
        "guideline_version_id": rnd.guideline_version_id,
        "annotation_ids": list(rnd.annotation_ids),
        "notes": rnd.notes,
    }


def decode_round(data: dict[str, Any]) -> AnnotationRound:
    return AnnotationRound(
        id=data["id"],
        guideline_version_id=data["guideline_version_id"],
        annotation_ids=tuple(data.get("annotation_ids", [])),
        notes=data.get("notes", ""),
    )


def canonical_json(payload: Any) -> str:
    """Serialize to the canonical wire form: sorted keys, no extra whitespace.

    Every surface that emits records (library helpers, CLI, HTTP API) goes
    through this function so the three outputs are byte-identical.
    """
    return json.dumps(payload, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def span_list(spans: Iterable[Span]) -> list[list[int]]:
    return [[s, e] for s, e in spans]
