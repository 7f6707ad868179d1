"""Shared fixtures: a small seeded workspace used by service-level tests."""

from __future__ import annotations

from datetime import datetime, timezone

import pytest

from factalign.calibration import GoldMatching
from factalign.model import (
    Annotation,
    AnnotationRound,
    Annotator,
    Document,
    Fact,
    GuidelineVersion,
)
from factalign.store import Workspace

T0 = datetime(2026, 1, 5, 12, 0, 0, tzinfo=timezone.utc)
T1 = datetime(2026, 2, 1, 12, 0, 0, tzinfo=timezone.utc)

DOC1_TEXT = "Anna meets Bob. Bob pays the fee."
DOC2_TEXT = "Carol files Form 42. The office closes early."


def _fact(doc_text: str, fact_text: str, anchor_source: str | None = None) -> Fact:
    """Fact anchored at the first occurrence of anchor_source (default: its
    own text) in the document, or unanchored if absent."""
    needle = anchor_source if anchor_source is not None else fact_text
    start = doc_text.find(needle)
    if start < 0:
        return Fact(text=fact_text)
    return Fact(text=fact_text, anchors=((start, start + len(needle)),))


def build_workspace(root) -> Workspace:
    """Two documents, three annotators, two rounds, one gold matching.

    Round r1 (guideline g1) has disagreement on doc1; round r2 (guideline
    g2) re-annotates doc1 with identical fact lists, so agreement improves
    across rounds.
    """
    ws = Workspace(root)
    ws.put(Document(id="doc1", text=DOC1_TEXT))
    ws.put(Document(id="doc2", text=DOC2_TEXT))
    ws.put(Annotator(id="p1", kind="human", label="Annotator One"))
    ws.put(Annotator(id="p2", kind="human", label="Annotator Two"))
    ws.put(Annotator(id="p3", kind="model", label="external model"))
    ws.put(GuidelineVersion(id="g1", version=1, body="mark every claim", created_at=T0))
    ws.put(GuidelineVersion(id="g2", version=2, body="split conjunctions", created_at=T1))

    a1 = Annotation(
        id="a1", document_id="doc1", annotator_id="p1", guideline_version_id="g1",
        facts=(
            _fact(DOC1_TEXT, "Anna meets Bob"),
            _fact(DOC1_TEXT, "Bob pays the fee"),
        ),
        created_at=T0,
    )
    a2 = Annotation(
        id="a2", document_id="doc1", annotator_id="p2", guideline_version_id="g1",
        facts=(
            _fact(DOC1_TEXT, "Anna meets Bob"),
            Fact(text="the meeting is paid for"),
        ),
        created_at=T0,
    )
    a6 = Annotation(
        id="a6", document_id="doc1", annotator_id="p3", guideline_version_id="g1",
        facts=(
            _fact(DOC1_TEXT, "Anna meets Bob"),
            _fact(DOC1_TEXT, "Bob pays the fee"),
            Fact(text="a fee exists"),
        ),
        created_at=T0,
    )
    a3 = Annotation(
        id="a3", document_id="doc1", annotator_id="p1", guideline_version_id="g2",
        facts=a1.facts, created_at=T1,
    )
    a4 = Annotation(
        id="a4", document_id="doc1", annotator_id="p2", guideline_version_id="g2",
        facts=a1.facts, created_at=T1,
    )
    a5 = Annotation(
        id="a5", document_id="doc2", annotator_id="p1", guideline_version_id="g2",
        facts=(_fact(DOC2_TEXT, "Carol files Form 42"),),
        created_at=T1,
    )
    for annotation in (a1, a2, a3, a4, a5, a6):
        ws.put(annotation)

    ws.put(AnnotationRound(id="r1", guideline_version_id="g1",
                           annotation_ids=("a1", "a2", "a6")))
    ws.put(AnnotationRound(id="r2", guideline_version_id="g2",
                           annotation_ids=("a3", "a4")))
    ws.put(GoldMatching(annotation_a_id="a1", annotation_b_id="a2",
                        pairs=frozenset({(0, 0)})))
    ws.put(GoldMatching(annotation_a_id="a1", annotation_b_id="a6",
                        pairs=frozenset({(0, 0), (1, 1)})))
    return ws


@pytest.fixture
def seeded_workspace(tmp_path) -> Workspace:
    return build_workspace(tmp_path / "ws")
