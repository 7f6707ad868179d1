"""Agreement analytics over stored annotations.

Everything here is a pure computation on immutable inputs: pairwise IAA
matrices for heatmaps, fact-count distributions, convergence series across
guideline versions, character-level coverage of the source text, semantic
clustering with redundancy detection, and majority-vote consensus built from
cluster medoids.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

import numpy as np

from .embedding import EmbeddingCache, EmbeddingProvider, embed_texts
from .errors import DocumentMismatch, TooFewAnnotations
from .matching import match_annotations, similarity_matrix
from .model import Annotation, AnnotationRound, Document, GuidelineVersion
from .textnorm import content_tokens

AGGREGATE_SCOPE = "aggregate"
OVERSPEC_FRACTION = 0.5


@dataclass(frozen=True)
class IaaMatrix:
    annotator_ids: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]
    scope: str


@dataclass(frozen=True)
class AnnotatorStats:
    annotator_id: str
    mean: float
    median: float
    min_count: int
    max_count: int


@dataclass(frozen=True)
class FactCountReport:
    counts: tuple[tuple[str, str, int], ...]
    aggregates: tuple[AnnotatorStats, ...]


@dataclass(frozen=True)
class ConvergencePoint:
    guideline_version_id: str
    mean_iaa: float
    median_iaa: float
    pair_count: int


@dataclass(frozen=True)
class CoverageReport:
    document_id: str
    covered: tuple[tuple[int, int], ...]
    gaps: tuple[tuple[int, int], ...]
    overspecified: tuple[int, ...]
    unanchored: tuple[int, ...]


@dataclass(frozen=True)
class ClusterMember:
    annotation_id: str
    fact_index: int
    annotator_id: str
    text: str


@dataclass(frozen=True)
class FactCluster:
    members: tuple[ClusterMember, ...]
    medoid: ClusterMember


@dataclass(frozen=True)
class ConsensusFact:
    text: str
    annotator_ids: tuple[str, ...]
    cluster_size: int


def iaa_matrix(
    annotations: Sequence[Annotation],
    provider: EmbeddingProvider,
    threshold: float,
    *,
    cache: EmbeddingCache | None = None,
) -> IaaMatrix:
    """Pairwise IAA between all annotators of one document.

    Each unordered pair is matched once and mirrored, so the matrix is
    exactly symmetric; the diagonal is 1.0 by definition.
    """
    if len(annotations) < 2:
        raise TooFewAnnotations(
            f"need at least 2 annotations, got {len(annotations)}"
        )
    documents = {a.document_id for a in annotations}
    if len(documents) != 1:
        raise DocumentMismatch(
            f"annotations span multiple documents: {sorted(documents)}"
        )
    by_annotator = {a.annotator_id: a for a in annotations}
    if len(by_annotator) != len(annotations):
        raise ValueError("each annotator may appear once per matrix")
    ids = tuple(sorted(by_annotator))
    n = len(ids)
    values = [[1.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            result = match_annotations(
                by_annotator[ids[i]], by_annotator[ids[j]], provider,
                threshold=threshold, cache=cache,
            )
            values[i][j] = result.iaa
            values[j][i] = result.iaa
    return IaaMatrix(
        annotator_ids=ids,
        values=tuple(tuple(row) for row in values),
        scope=documents.pop(),
    )


def mean_iaa_matrix(matrices: Sequence[IaaMatrix]) -> IaaMatrix:
    """Entrywise mean across per-document matrices.

    Annotator sets may differ between documents; each pair is averaged over
    the matrices where both annotators appear. Pairs that never co-occur get
    0.0, which the heatmap renders as no-data-equals-no-agreement.
    """
    if not matrices:
        raise TooFewAnnotations("cannot aggregate zero matrices")
    ids = tuple(sorted({a for m in matrices for a in m.annotator_ids}))
    n = len(ids)
    values = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            observed = []
            for m in matrices:
                if ids[i] in m.annotator_ids and ids[j] in m.annotator_ids:
                    mi = m.annotator_ids.index(ids[i])
                    mj = m.annotator_ids.index(ids[j])
                    observed.append(m.values[mi][mj])
            if observed:
                mean = math.fsum(observed) / len(observed)
                values[i][j] = mean
                values[j][i] = mean
    return IaaMatrix(
        annotator_ids=ids,
        values=tuple(tuple(row) for row in values),
        scope=AGGREGATE_SCOPE,
    )


def fact_count_report(annotations: Sequence[Annotation]) -> FactCountReport:
    """Fact counts per (annotator, document) with per-annotator summaries."""
    counts = sorted(
        (a.annotator_id, a.document_id, len(a.facts)) for a in annotations
    )
    per_annotator: dict[str, list[int]] = {}
    for annotator_id, _, count in counts:
        per_annotator.setdefault(annotator_id, []).append(count)
    aggregates = tuple(
        AnnotatorStats(
            annotator_id=annotator_id,
            mean=float(statistics.mean(values)),
            median=float(statistics.median(values)),
            min_count=min(values),
            max_count=max(values),
        )
        for annotator_id, values in sorted(per_annotator.items())
    )
    return FactCountReport(counts=tuple(counts), aggregates=aggregates)


def convergence_series(
    rounds: Sequence[AnnotationRound],
    provider: EmbeddingProvider,
    threshold: float,
    *,
    annotations: Mapping[str, Annotation],
    guidelines: Mapping[str, GuidelineVersion],
    cache: EmbeddingCache | None = None,
) -> list[ConvergencePoint]:
    """One agreement point per round, ordered by guideline version.

    A round's value is the mean IAA over every (document, annotator pair) it
    contains; the median rides along for the UI. A document with fewer than
    two annotations inside a round makes agreement unmeasurable there, which
    is an error rather than a silent skip.
    """
    def sort_key(rnd):
        guideline = guidelines.get(rnd.guideline_version_id)
        version = guideline.version if guideline is not None else 0
        return (version, rnd.guideline_version_id, rnd.id)

    points = []
    for rnd in sorted(rounds, key=sort_key):
        members = []
        for ann_id in rnd.annotation_ids:
            try:
                members.append(annotations[ann_id])
            except KeyError:
                raise ValueError(
                    f"round {rnd.id!r} references unknown annotation {ann_id!r}"
                ) from None
        by_document: dict[str, list[Annotation]] = {}
        for ann in members:
            by_document.setdefault(ann.document_id, []).append(ann)
        iaas: list[float] = []
        for document_id in sorted(by_document):
            group = by_document[document_id]
            if len(group) < 2:
                raise TooFewAnnotations(
                    f"round {rnd.id!r} has a single annotation for document "
                    f"{document_id!r}"
                )
            matrix = iaa_matrix(group, provider, threshold, cache=cache)
            n = len(matrix.annotator_ids)
            for i in range(n):
                for j in range(i + 1, n):
                    iaas.append(matrix.values[i][j])
        if not iaas:
            raise TooFewAnnotations(f"round {rnd.id!r} has no annotator pairs")
        points.append(
            ConvergencePoint(
                guideline_version_id=rnd.guideline_version_id,
                mean_iaa=math.fsum(iaas) / len(iaas),
                median_iaa=float(statistics.median(iaas)),
                pair_count=len(iaas),
            )
        )
    return points


def _interval_union(spans: list[tuple[int, int]], length: int) -> list[tuple[int, int]]:
    clipped = []
    for start, end in spans:
        start = max(0, start)
        end = min(length, end)
        if end > start:
            clipped.append((start, end))
    clipped.sort()
    merged: list[tuple[int, int]] = []
    for start, end in clipped:
        if merged and start <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], end))
        else:
            merged.append((start, end))
    return merged


def coverage_report(document: Document, annotation: Annotation) -> CoverageReport:
    """Project fact anchors back onto the source text.

    Covered and gap spans tile [0, len(text)) exactly. A fact with no anchors
    is reported as unanchored and contributes nothing to coverage. A fact is
    flagged overspecified when less than half of its content tokens occur in
    the text its own anchors cover, i.e. the fact says more than it points at.
    """
    if annotation.document_id != document.id:
        raise DocumentMismatch(
            f"annotation {annotation.id!r} targets document "
            f"{annotation.document_id!r}, not {document.id!r}"
        )
    length = len(document.text)
    all_spans: list[tuple[int, int]] = []
    unanchored = []
    overspecified = []
    for index, fact in enumerate(annotation.facts):
        if not fact.anchors:
            unanchored.append(index)
            continue
        spans = [(s, e) for s, e in fact.anchors]
        all_spans.extend(spans)
        anchored_text = " ".join(
            document.text[max(0, s):min(length, e)] for s, e in spans
        )
        fact_tokens = set(content_tokens(fact.text, document.language))
        if not fact_tokens:
            continue
        span_tokens = set(content_tokens(anchored_text, document.language))
        present = len(fact_tokens & span_tokens)
        if present / len(fact_tokens) < OVERSPEC_FRACTION:
            overspecified.append(index)

    covered = _interval_union(all_spans, length)
    gaps = []
    cursor = 0
    for start, end in covered:
        if start > cursor:
            gaps.append((cursor, start))
        cursor = end
    if cursor < length:
        gaps.append((cursor, length))
    return CoverageReport(
        document_id=document.id,
        covered=tuple(covered),
        gaps=tuple(gaps),
        overspecified=tuple(overspecified),
        unanchored=tuple(unanchored),
    )


def _fact_similarities(
    annotations: Sequence[Annotation],
    provider: EmbeddingProvider,
    cache: EmbeddingCache | None,
):
    nodes = []
    texts = []
    for ann in sorted(annotations, key=lambda a: a.id):
        for index, fact in enumerate(ann.facts):
            nodes.append((ann.id, index, ann.annotator_id, fact.text))
            texts.append(fact.text)
    if not texts:
        return nodes, np.zeros((0, 0))
    embeds = embed_texts(provider, texts, cache=cache)
    return nodes, similarity_matrix(embeds, embeds)


def redundancy_pairs(
    annotation: Annotation,
    provider: EmbeddingProvider,
    threshold: float,
    *,
    cache: EmbeddingCache | None = None,
) -> list[tuple[int, int, float]]:
    """Within-list fact pairs at or above the threshold, most similar first."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")
    texts = [f.text for f in annotation.facts]
    if len(texts) < 2:
        return []
    embeds = embed_texts(provider, texts, cache=cache)
    matrix = similarity_matrix(embeds, embeds)
    pairs = []
    for i in range(len(texts)):
        for j in range(i + 1, len(texts)):
            sim = float(matrix[i, j])
            if sim >= threshold:
                pairs.append((i, j, sim))
    pairs.sort(key=lambda p: (-p[2], p[0], p[1]))
    return pairs


def cluster_facts(
    annotations: Sequence[Annotation],
    provider: EmbeddingProvider,
    threshold: float,
    *,
    cache: EmbeddingCache | None = None,
) -> list[FactCluster]:
    """Connected components over the cross-annotation similarity graph.

    Facts from the same annotation never share an edge (one annotator
    repeating themselves is redundancy, not agreement), but transitive
    chains through other annotations can still place them in one cluster.
    Every fact lands in exactly one cluster; singletons are kept.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")
    if not annotations:
        raise TooFewAnnotations("need at least one annotation to cluster")
    nodes, matrix = _fact_similarities(annotations, provider, cache)
    n = len(nodes)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(i + 1, n):
            if nodes[i][0] == nodes[j][0]:
                continue
            if float(matrix[i, j]) >= threshold:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri

    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)

    clusters = []
    for indices in sorted(groups.values(), key=lambda g: (nodes[g[0]][0], nodes[g[0]][1])):
        members = tuple(
            ClusterMember(
                annotation_id=nodes[i][0],
                fact_index=nodes[i][1],
                annotator_id=nodes[i][2],
                text=nodes[i][3],
            )
            for i in indices
        )
        if len(indices) == 1:
            medoid = members[0]
        else:
            best = None
            for pos, i in enumerate(indices):
                mean_sim = math.fsum(
                    float(matrix[i, j]) for j in indices if j != i
                ) / (len(indices) - 1)
                key = (-mean_sim, members[pos].annotation_id, members[pos].fact_index)
                if best is None or key < best[0]:
                    best = (key, members[pos])
            medoid = best[1]
        clusters.append(FactCluster(members=members, medoid=medoid))
    return clusters


def majority_vote(
    clusters: Sequence[FactCluster],
    annotator_total: int,
    quorum: float,
) -> list[ConsensusFact]:
    """Medoid texts of clusters supported by enough distinct annotators.

    The support bar is ceil(quorum * annotator_total); the tiny subtraction
    keeps float products like 0.6 * 5 from ceiling up to 4.
    """
    if annotator_total < 1:
        raise ValueError(f"annotator_total must be >= 1, got {annotator_total}")
    if not 0.0 < quorum <= 1.0:
        raise ValueError(f"quorum must be in (0, 1], got {quorum}")
    required = max(1, math.ceil(quorum * annotator_total - 1e-9))
    consensus = []
    for cluster in clusters:
        support = sorted({m.annotator_id for m in cluster.members})
        if len(support) >= required:
            consensus.append(
                ConsensusFact(
                    text=cluster.medoid.text,
                    annotator_ids=tuple(support),
                    cluster_size=len(cluster.members),
                )
            )
    return consensus


def encode_iaa_matrix(matrix: IaaMatrix) -> dict[str, Any]:
    return {
        "annotator_ids": list(matrix.annotator_ids),
        "values": [list(row) for row in matrix.values],
        "scope": matrix.scope,
    }


def encode_fact_count_report(report: FactCountReport) -> dict[str, Any]:
    return {
        "counts": [
            {"annotator_id": a, "document_id": d, "count": c}
            for a, d, c in report.counts
        ],
        "aggregates": [
            {
                "annotator_id": s.annotator_id,
                "mean": s.mean,
                "median": s.median,
                "min": s.min_count,
                "max": s.max_count,
            }
            for s in report.aggregates
        ],
    }


def encode_convergence_point(point: ConvergencePoint) -> dict[str, Any]:
    return {
        "guideline_version_id": point.guideline_version_id,
        "mean_iaa": point.mean_iaa,
        "median_iaa": point.median_iaa,
        "pair_count": point.pair_count,
    }


def encode_coverage_report(report: CoverageReport) -> dict[str, Any]:
    return {
        "document_id": report.document_id,
        "covered": [list(span) for span in report.covered],
        "gaps": [list(span) for span in report.gaps],
        "overspecified": list(report.overspecified),
        "unanchored": list(report.unanchored),
    }


def encode_fact_cluster(cluster: FactCluster) -> dict[str, Any]:
    def member(m: ClusterMember) -> dict[str, Any]:
        return {
            "annotation_id": m.annotation_id,
            "fact_index": m.fact_index,
            "annotator_id": m.annotator_id,
            "text": m.text,
        }

    return {
        "members": [member(m) for m in cluster.members],
        "medoid": member(cluster.medoid),
    }


def encode_consensus_fact(fact: ConsensusFact) -> dict[str, Any]:
    return {
        "text": fact.text,
        "annotator_ids": list(fact.annotator_ids),
        "cluster_size": fact.cluster_size,
    }
