"""Embedding-based fact matching, agreement analytics, and disagreement views.

The pipeline: annotators decompose a document into atomic facts; facts are
embedded, optimally assigned across annotators, filtered by a similarity
threshold, and scored with a Jaccard-style agreement value. On top of that
sit agreement matrices, convergence tracking, coverage checks, fact
clustering with majority-vote consensus, rule-based entity graphs, and a
parser for conditional/conjunctive sentence structure. ``factalign.api``
serves it over HTTP, ``factalign.cli`` from the command line.
"""

from .analytics import (
    ConsensusFact,
    ConvergencePoint,
    CoverageReport,
    FactCluster,
    FactCountReport,
    IaaMatrix,
    cluster_facts,
    convergence_series,
    coverage_report,
    fact_count_report,
    iaa_matrix,
    majority_vote,
    mean_iaa_matrix,
    redundancy_pairs,
)
from .branching import (
    Decomposition,
    enumerate_decompositions,
    fact_count_bounds,
    parse_logic,
    render,
)
from .calibration import (
    CalibrationReport,
    GoldMatching,
    calibrate_threshold,
    evaluate_provider,
    pair_deviation,
)
from .config import ServiceConfig, load_config, make_provider
from .embedding import (
    EmbeddingCache,
    RemoteEmbedder,
    TrigramEmbedder,
    cosine_similarity,
    embed_texts,
    fallback_embed,
)
from .errors import (
    DimensionMismatch,
    DocumentMismatch,
    EmptyGoldSet,
    EmptyText,
    FactalignError,
    IntegrityViolation,
    InvalidCounts,
    NonFiniteEntry,
    ProviderUnavailable,
    StorageFailure,
    TooFewAnnotations,
    UnknownRecord,
    UnknownRound,
)
from .kg import (
    GraphDiff,
    KnowledgeGraph,
    extract_entities,
    extract_relations,
    fact_list_graph,
    fact_small_multiples,
    graph_diff,
    graph_from_text,
    highlight_entities,
)
from .matching import (
    DEFAULT_THRESHOLD,
    MatchResult,
    filter_matches,
    jaccard_iaa,
    match_annotations,
    match_fact_texts,
    optimal_assignment,
    similarity_matrix,
)
from .model import (
    Annotation,
    AnnotationRound,
    Annotator,
    Document,
    Fact,
    GuidelineVersion,
    canonical_json,
    validate_annotation,
)
from .store import Workspace

__version__ = "0.1.0"

__all__ = [
    "Annotation",
    "AnnotationRound",
    "Annotator",
    "CalibrationReport",
    "ConsensusFact",
    "ConvergencePoint",
    "CoverageReport",
    "DEFAULT_THRESHOLD",
    "Decomposition",
    "DimensionMismatch",
    "Document",
    "DocumentMismatch",
    "EmbeddingCache",
    "EmptyGoldSet",
    "EmptyText",
    "Fact",
    "FactCluster",
    "FactCountReport",
    "FactalignError",
    "GoldMatching",
    "GraphDiff",
    "GuidelineVersion",
    "IaaMatrix",
    "IntegrityViolation",
    "InvalidCounts",
    "KnowledgeGraph",
    "MatchResult",
    "NonFiniteEntry",
    "ProviderUnavailable",
    "RemoteEmbedder",
    "ServiceConfig",
    "StorageFailure",
    "TooFewAnnotations",
    "TrigramEmbedder",
    "UnknownRecord",
    "UnknownRound",
    "Workspace",
    "calibrate_threshold",
    "canonical_json",
    "cluster_facts",
    "convergence_series",
    "cosine_similarity",
    "coverage_report",
    "embed_texts",
    "enumerate_decompositions",
    "evaluate_provider",
    "extract_entities",
    "extract_relations",
    "fact_count_bounds",
    "fact_count_report",
    "fact_list_graph",
    "fact_small_multiples",
    "fallback_embed",
    "filter_matches",
    "graph_diff",
    "graph_from_text",
    "highlight_entities",
    "iaa_matrix",
    "jaccard_iaa",
    "load_config",
    "majority_vote",
    "make_provider",
    "match_annotations",
    "match_fact_texts",
    "mean_iaa_matrix",
    "optimal_assignment",
    "pair_deviation",
    "parse_logic",
    "redundancy_pairs",
    "render",
    "similarity_matrix",
    "validate_annotation",
]
