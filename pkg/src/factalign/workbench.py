"""Workspace-level view builders shared by the API, the CLI, and reports.

Each function loads the records a view needs, delegates the computation to
the owning module, and returns that module's result type unchanged. Routing
every caller through here is what keeps HTTP responses, CLI output, and
direct library calls byte-for-byte identical.
"""

from __future__ import annotations

from typing import Sequence

from .analytics import (
    ConsensusFact,
    ConvergencePoint,
    CoverageReport,
    FactCountReport,
    IaaMatrix,
    cluster_facts,
    convergence_series,
    coverage_report,
    fact_count_report,
    iaa_matrix,
    majority_vote,
    mean_iaa_matrix,
)
from .calibration import DEFAULT_GRID_STEP, CalibrationReport, calibrate_threshold
from .config import THRESHOLD_SETTING, ServiceConfig, effective_threshold
from .embedding import EmbeddingProvider
from .errors import EmptyGoldSet, IntegrityViolation, TooFewAnnotations
from .kg import KnowledgeGraph, fact_list_graph, fact_small_multiples, graph_from_text
from .matching import MatchResult, match_annotations
from .model import Annotation, Document
from .store import Workspace


def resolve_threshold(config: ServiceConfig, workspace: Workspace) -> float:
    """Matching threshold for a workspace: applied calibration beats config."""
    return effective_threshold(config, workspace.get_setting(THRESHOLD_SETTING))


def _document_of(workspace: Workspace, annotation: Annotation) -> Document:
    document = workspace.get("document", annotation.document_id)
    if document is None:
        raise IntegrityViolation(
            f"annotation {annotation.id!r} references missing document "
            f"{annotation.document_id!r}"
        )
    return document


def _by_document(annotations: Sequence[Annotation]) -> list[list[Annotation]]:
    groups: dict[str, list[Annotation]] = {}
    for annotation in annotations:
        groups.setdefault(annotation.document_id, []).append(annotation)
    return [group for _, group in sorted(groups.items())]


def match_view(
    workspace: Workspace,
    provider: EmbeddingProvider,
    annotation_a_id: str,
    annotation_b_id: str,
    threshold: float,
) -> MatchResult:
    a = workspace.require("annotation", annotation_a_id)
    b = workspace.require("annotation", annotation_b_id)
    return match_annotations(a, b, provider, threshold, cache=workspace.cache)


def _mean_or_single(matrices: list[IaaMatrix]) -> IaaMatrix:
    if not matrices:
        raise TooFewAnnotations("no document in scope has two or more annotations")
    if len(matrices) == 1:
        return matrices[0]
    return mean_iaa_matrix(matrices)


def _scoped_annotations(
    workspace: Workspace,
    round_id: str | None,
    document_id: str | None,
) -> list[list[Annotation]]:
    """Annotation groups that may be compared against each other.

    A round is one scope. Without a round filter, each stored round becomes
    its own scope (so re-annotation by the same annotator under a revised
    guideline never collides inside one matrix) and annotations outside any
    round form a final scope of their own.
    """
    if round_id is not None:
        scopes = [workspace.list_round_annotations(round_id)]
    else:
        round_ids = workspace.list_ids("round")
        if round_ids:
            scopes = [workspace.list_round_annotations(rid) for rid in round_ids]
            in_rounds = {a.id for scope in scopes for a in scope}
            loose = [
                a for a in workspace.list_records("annotation")
                if a.id not in in_rounds
            ]
            if loose:
                scopes.append(loose)
        else:
            scopes = [workspace.list_records("annotation")]
    if document_id is not None:
        scopes = [
            [a for a in scope if a.document_id == document_id] for scope in scopes
        ]
    return scopes


def _scope_matrices(
    workspace: Workspace,
    provider: EmbeddingProvider,
    threshold: float,
    scopes: list[list[Annotation]],
) -> list[IaaMatrix]:
    return [
        iaa_matrix(group, provider, threshold, cache=workspace.cache)
        for scope in scopes
        for group in _by_document(scope)
        if len(group) >= 2
    ]


def heatmap_view(
    workspace: Workspace,
    provider: EmbeddingProvider,
    threshold: float,
    *,
    round_id: str | None = None,
    document_id: str | None = None,
) -> IaaMatrix:
    """Agreement matrix for a round, a document, or their intersection.

    Scopes spanning several documents (or several rounds) are averaged per
    annotator pair; a single measurable group returns its matrix untouched.
    """
    if round_id is None and document_id is None:
        raise ValueError("need a document id, a round id, or both")
    if document_id is not None:
        workspace.require("document", document_id)
    scopes = _scoped_annotations(workspace, round_id, document_id)
    return _mean_or_single(_scope_matrices(workspace, provider, threshold, scopes))


def workspace_heatmap(
    workspace: Workspace,
    provider: EmbeddingProvider,
    threshold: float,
) -> IaaMatrix | None:
    """Aggregate IAA over everything measurable, or None if nothing is."""
    scopes = _scoped_annotations(workspace, None, None)
    matrices = _scope_matrices(workspace, provider, threshold, scopes)
    if not matrices:
        return None
    return _mean_or_single(matrices)


def histogram_view(workspace: Workspace, *, round_id: str | None = None) -> FactCountReport:
    if round_id is not None:
        annotations = workspace.list_round_annotations(round_id)
    else:
        annotations = workspace.list_records("annotation")
    return fact_count_report(annotations)


def convergence_view(
    workspace: Workspace,
    provider: EmbeddingProvider,
    threshold: float,
) -> list[ConvergencePoint]:
    rounds = workspace.list_records("round")
    if not rounds:
        return []
    annotations = {a.id: a for a in workspace.list_records("annotation")}
    guidelines = {g.id: g for g in workspace.list_records("guideline")}
    return convergence_series(
        rounds, provider, threshold,
        annotations=annotations, guidelines=guidelines, cache=workspace.cache,
    )


def coverage_view(workspace: Workspace, annotation_id: str) -> CoverageReport:
    annotation = workspace.require("annotation", annotation_id)
    document = _document_of(workspace, annotation)
    return coverage_report(document, annotation)


def source_graph_view(workspace: Workspace, document_id: str) -> KnowledgeGraph:
    document = workspace.require("document", document_id)
    return graph_from_text(document.text, language=document.language)


def fact_graphs_view(workspace: Workspace, annotation_id: str) -> list[KnowledgeGraph]:
    annotation = workspace.require("annotation", annotation_id)
    document = _document_of(workspace, annotation)
    return fact_small_multiples(annotation, language=document.language)


def fact_list_graph_view(workspace: Workspace, annotation_id: str) -> KnowledgeGraph:
    annotation = workspace.require("annotation", annotation_id)
    document = _document_of(workspace, annotation)
    return fact_list_graph(annotation, language=document.language)


def calibrate_view(
    workspace: Workspace,
    provider: EmbeddingProvider,
    gold_ids: Sequence[str],
    grid_step: float | None = None,
) -> CalibrationReport:
    if not gold_ids:
        raise EmptyGoldSet("empty gold set")
    golds = [workspace.require("gold", gold_id) for gold_id in gold_ids]
    annotations = {a.id: a for a in workspace.list_records("annotation")}
    step = DEFAULT_GRID_STEP if grid_step is None else grid_step
    return calibrate_threshold(
        golds, provider, step, annotations=annotations, cache=workspace.cache
    )


def consensus_view(
    workspace: Workspace,
    provider: EmbeddingProvider,
    round_id: str,
    clustering_threshold: float,
    quorum: float,
) -> list[ConsensusFact]:
    annotations = workspace.list_round_annotations(round_id)
    if not annotations:
        raise TooFewAnnotations(f"round {round_id!r} has no annotations")
    clusters = cluster_facts(
        annotations, provider, clustering_threshold, cache=workspace.cache
    )
    annotator_total = len({a.annotator_id for a in annotations})
    return majority_vote(clusters, annotator_total, quorum)
