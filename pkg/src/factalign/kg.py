"""Rule-based entity-relation graphs and graph comparison.

The extractor is a deterministic baseline: capitalized-token runs and digit
runs become entities, the token gap between neighboring mentions becomes the
relation label. Anything smarter (an NER model, an LLM extractor) can replace
it behind the same functions, since all downstream comparison works on plain
labels and triples.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

from .model import Annotation
from .textnorm import (
    is_capitalized,
    is_number,
    normalize_label,
    split_sentences,
    stopwords_for,
    tokenize,
)

GRAPH_ORIGINS = ("source_text", "fact", "fact_list")
RELATION_FALLBACK = "related_to"
RELATION_MAX_TOKENS = 5
FREQUENCY_FILTER_MIN_SENTENCES = 10
FREQUENCY_FILTER_FRACTION = 0.2

Triple = tuple[str, str, str]


@dataclass(frozen=True)
class Entity:
    label: str
    spans: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.label:
            raise ValueError("entity label must be non-empty")


@dataclass(frozen=True)
class KnowledgeGraph:
    nodes: tuple[Entity, ...]
    edges: tuple[Triple, ...]
    origin: str

    def node_labels(self) -> frozenset[str]:
        return frozenset(e.label for e in self.nodes)


@dataclass(frozen=True)
class GraphDiff:
    missing_nodes: frozenset[str]
    extra_nodes: frozenset[str]
    missing_edges: frozenset[Triple]
    extra_edges: frozenset[Triple]
    uncertain: frozenset[Triple]


@dataclass(frozen=True)
class EntityHit:
    label: str
    start: int
    end: int


def _candidate_runs(sentence: str, offset: int, stopwords: frozenset[str]):
    """Maximal runs of adjacent candidate tokens within one sentence.

    A token is a candidate when capitalized or numeric and not a stopword;
    two candidates merge when only whitespace separates them.
    """
    runs = []
    current: list[tuple[str, int, int]] = []
    for token, start, end in tokenize(sentence):
        candidate = (is_capitalized(token) or is_number(token)) and (
            token.casefold() not in stopwords
        )
        if not candidate:
            if current:
                runs.append(current)
                current = []
            continue
        if current:
            prev_end = current[-1][2]
            if sentence[prev_end:start].strip():
                runs.append(current)
                current = []
        current.append((token, start, end))
    if current:
        runs.append(current)
    out = []
    for run in runs:
        text = sentence[run[0][1] : run[-1][2]]
        out.append((normalize_label(text), offset + run[0][1], offset + run[-1][2]))
    return out


def extract_entities(text: str, language: str = "en") -> list[Entity]:
    """Entity candidates with all their mention spans, merged by label.

    On longer texts (10+ sentences) a frequency filter drops labels that
    show up in over a fifth of the sentences; German capitalizes every noun,
    and without the filter the most generic ones drown the graph. Short
    snippets, like single facts, are left untouched.
    """
    stopwords = stopwords_for(language)
    sentences = split_sentences(text)
    mentions_by_label: dict[str, list[tuple[int, int]]] = {}
    sentence_hits: dict[str, set[int]] = {}
    first_seen: dict[str, int] = {}
    for s_index, (sentence, offset) in enumerate(sentences):
        for label, start, end in _candidate_runs(sentence, offset, stopwords):
            mentions_by_label.setdefault(label, []).append((start, end))
            sentence_hits.setdefault(label, set()).add(s_index)
            first_seen.setdefault(label, start)

    total = len(sentences)
    if total >= FREQUENCY_FILTER_MIN_SENTENCES:
        cutoff = FREQUENCY_FILTER_FRACTION * total
        for label in list(mentions_by_label):
            if len(sentence_hits[label]) > cutoff:
                del mentions_by_label[label]

    ordered = sorted(mentions_by_label, key=lambda lab: (first_seen[lab], lab))
    return [
        Entity(label=label, spans=tuple(sorted(mentions_by_label[label])))
        for label in ordered
    ]


def extract_relations(
    text: str, entities: Sequence[Entity], language: str = "en"
) -> list[Triple]:
    """Triples between neighboring entity mentions of each sentence.

    The relation label is the casefolded token gap between the two mentions,
    truncated to RELATION_MAX_TOKENS; an empty gap degrades to the
    "related_to" fallback so adjacency itself is still recorded.
    """
    span_to_label = {}
    for entity in entities:
        for span in entity.spans:
            span_to_label[span] = entity.label
    triples: list[Triple] = []
    for sentence, offset in split_sentences(text):
        window = (offset, offset + len(sentence))
        mentions = sorted(
            (span for span in span_to_label if window[0] <= span[0] and span[1] <= window[1]),
        )
        for left, right in zip(mentions, mentions[1:]):
            gap = text[left[1] : right[0]]
            gap_tokens = [tok.casefold() for tok, _, _ in tokenize(gap)]
            relation = " ".join(gap_tokens[:RELATION_MAX_TOKENS]) or RELATION_FALLBACK
            triples.append((span_to_label[left], relation, span_to_label[right]))
    return triples


def build_graph(
    triples: Iterable[Triple],
    origin: str,
    *,
    entities: Sequence[Entity] = (),
) -> KnowledgeGraph:
    """Deduplicated graph from triples; optional entities add isolated nodes
    and carry mention spans for the endpoint labels."""
    if origin not in GRAPH_ORIGINS:
        raise ValueError(f"origin must be one of {GRAPH_ORIGINS}, got {origin!r}")
    edges = tuple(sorted(dict.fromkeys(tuple(t) for t in triples)))
    spans_by_label = {e.label: e.spans for e in entities}
    labels = set(spans_by_label)
    for source, _, target in edges:
        labels.add(source)
        labels.add(target)
    nodes = tuple(
        Entity(label=label, spans=spans_by_label.get(label, ()))
        for label in sorted(labels)
    )
    return KnowledgeGraph(nodes=nodes, edges=edges, origin=origin)


def graph_from_text(text: str, language: str = "en", origin: str = "source_text") -> KnowledgeGraph:
    entities = extract_entities(text, language)
    triples = extract_relations(text, entities, language)
    return build_graph(triples, origin, entities=entities)


def fact_small_multiples(annotation: Annotation, language: str = "en") -> list[KnowledgeGraph]:
    """One little graph per fact, in fact order."""
    return [
        graph_from_text(fact.text, language, origin="fact")
        for fact in annotation.facts
    ]


def fact_list_graph(annotation: Annotation, language: str = "en") -> KnowledgeGraph:
    """Union of all per-fact graphs. Spans are fact-local and would collide
    across facts, so merged nodes drop them."""
    labels: set[str] = set()
    triples: list[Triple] = []
    for graph in fact_small_multiples(annotation, language):
        labels.update(graph.node_labels())
        triples.extend(graph.edges)
    graph = build_graph(triples, "fact_list")
    extra = labels - graph.node_labels()
    if extra:
        nodes = tuple(
            sorted(
                graph.nodes + tuple(Entity(label=lab, spans=()) for lab in extra),
                key=lambda e: e.label,
            )
        )
        graph = KnowledgeGraph(nodes=nodes, edges=graph.edges, origin="fact_list")
    return graph


def graph_diff(reference: KnowledgeGraph, candidate: KnowledgeGraph) -> GraphDiff:
    """Label-level comparison of two graphs.

    Edges are grouped by endpoint pair. A pair present in only one graph
    yields missing or extra edges; when both graphs connect the same pair
    but the reference uses a relation wording the candidate lacks, that
    reference triple lands in ``uncertain`` (the link is attested, the
    wording is contested).
    """
    ref_nodes = reference.node_labels()
    cand_nodes = candidate.node_labels()

    def by_pair(graph: KnowledgeGraph) -> dict[tuple[str, str], set[str]]:
        grouped: dict[tuple[str, str], set[str]] = {}
        for source, relation, target in graph.edges:
            grouped.setdefault((source, target), set()).add(relation)
        return grouped

    ref_pairs = by_pair(reference)
    cand_pairs = by_pair(candidate)
    missing_edges = set()
    extra_edges = set()
    uncertain = set()
    for pair, relations in ref_pairs.items():
        if pair not in cand_pairs:
            missing_edges.update((pair[0], rel, pair[1]) for rel in relations)
            continue
        disputed = relations - cand_pairs[pair]
        uncertain.update((pair[0], rel, pair[1]) for rel in disputed)
    for pair, relations in cand_pairs.items():
        if pair not in ref_pairs:
            extra_edges.update((pair[0], rel, pair[1]) for rel in relations)

    return GraphDiff(
        missing_nodes=frozenset(ref_nodes - cand_nodes),
        extra_nodes=frozenset(cand_nodes - ref_nodes),
        missing_edges=frozenset(missing_edges),
        extra_edges=frozenset(extra_edges),
        uncertain=frozenset(uncertain),
    )


def _label_pattern(label: str) -> re.Pattern[str]:
    parts = [re.escape(part) for part in label.split()]
    return re.compile(r"\b" + r"\s+".join(parts) + r"\b", re.IGNORECASE)


def highlight_entities(
    annotation: Annotation, source_graph: KnowledgeGraph
) -> list[list[EntityHit]]:
    """Per fact, where each source-graph entity label occurs in the fact text."""
    patterns = [(entity.label, _label_pattern(entity.label)) for entity in source_graph.nodes]
    hits_per_fact = []
    for fact in annotation.facts:
        hits = []
        for label, pattern in patterns:
            for match in pattern.finditer(fact.text):
                hits.append(EntityHit(label=label, start=match.start(), end=match.end()))
        hits.sort(key=lambda h: (h.start, h.end, h.label))
        hits_per_fact.append(hits)
    return hits_per_fact


def encode_graph(graph: KnowledgeGraph) -> dict[str, Any]:
    return {
        "nodes": [
            {"label": e.label, "spans": [list(span) for span in e.spans]}
            for e in graph.nodes
        ],
        "edges": [list(edge) for edge in graph.edges],
        "origin": graph.origin,
    }


def decode_graph(payload: Mapping[str, Any]) -> KnowledgeGraph:
    """Inverse of encode_graph; malformed payloads raise ValueError."""
    try:
        entities = [
            Entity(
                label=node["label"],
                spans=tuple((int(a), int(b)) for a, b in node.get("spans", ())),
            )
            for node in payload.get("nodes", ())
        ]
        triples = [(str(s), str(r), str(t)) for s, r, t in payload["edges"]]
        origin = payload["origin"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"invalid graph payload: {exc}") from exc
    return build_graph(triples, origin, entities=entities)


def encode_graph_diff(diff: GraphDiff) -> dict[str, Any]:
    return {
        "missing_nodes": sorted(diff.missing_nodes),
        "extra_nodes": sorted(diff.extra_nodes),
        "missing_edges": [list(t) for t in sorted(diff.missing_edges)],
        "extra_edges": [list(t) for t in sorted(diff.extra_edges)],
        "uncertain": [list(t) for t in sorted(diff.uncertain)],
    }


def encode_entity_hits(hits_per_fact: Sequence[Sequence[EntityHit]]) -> list[list[dict[str, Any]]]:
    return [
        [{"label": h.label, "start": h.start, "end": h.end} for h in hits]
        for hits in hits_per_fact
    ]
