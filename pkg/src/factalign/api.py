"""HTTP facade over a workspace.

Every endpoint is a thin wrapper: load records, call the owning module,
serialize with the canonical JSON encoder. Bodies are rendered through the
same encoder the CLI uses, so for identical workspace state the HTTP
response, the CLI output, and a direct library call produce identical bytes.
"""

from __future__ import annotations

from typing import Any

from fastapi import FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, ConfigDict

from . import workbench
from .analytics import (
    encode_consensus_fact,
    encode_convergence_point,
    encode_coverage_report,
    encode_fact_count_report,
    encode_iaa_matrix,
)
from .branching import (
    encode_decomposition,
    encode_logic_tree,
    enumerate_decompositions,
    parse_logic,
)
from .calibration import encode_calibration_report
from .config import ServiceConfig, make_provider
from .embedding import EmbeddingProvider
from .errors import (
    DimensionMismatch,
    FactalignError,
    IntegrityViolation,
    ProviderUnavailable,
    StorageFailure,
    UnknownRecord,
)
from .kg import decode_graph, encode_graph, encode_graph_diff, graph_diff
from .matching import encode_match_result
from .model import canonical_json
from .store import Workspace, decode_record, encode_record, record_id

_KIND_SEGMENTS = {
    "document": "documents",
    "annotator": "annotators",
    "guideline": "guidelines",
    "annotation": "annotations",
    "round": "rounds",
    "gold": "golds",
}


def _json(payload: Any, status_code: int = 200) -> Response:
    return Response(
        canonical_json(payload), status_code=status_code, media_type="application/json"
    )


def _status_for(exc: FactalignError) -> int:
    if isinstance(exc, UnknownRecord):
        return 404
    if isinstance(exc, IntegrityViolation):
        return 409
    if isinstance(exc, (ProviderUnavailable, DimensionMismatch)):
        return 502
    if isinstance(exc, StorageFailure):
        return 500
    return 400


class MatchRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    annotation_a: str
    annotation_b: str
    threshold: float | None = None


class DiffRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    document: str | None = None
    annotation: str | None = None
    reference: dict[str, Any] | None = None
    candidate: dict[str, Any] | None = None


class ParseRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    sentence: str
    language: str | None = None


class CalibrateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    gold_ids: list[str]
    grid_step: float | None = None


class ConsensusRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    round: str
    quorum: float | None = None


def create_app(
    config: ServiceConfig | None = None,
    *,
    workspace: Workspace | None = None,
    provider: EmbeddingProvider | None = None,
) -> FastAPI:
    if config is None:
        config = ServiceConfig()
    config.validate()
    if workspace is None:
        workspace = Workspace(config.workspace)
    if provider is None:
        provider = make_provider(config)

    app = FastAPI(title="factalign")
    # The browser workbench may be served from a different origin than the
    # API; the service holds no credentials, so a permissive policy is fine.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def on_invalid_request(request: Request, exc: RequestValidationError):
        return _json({"error": "invalid payload", "detail": str(exc)}, 400)

    @app.exception_handler(FactalignError)
    async def on_domain_error(request: Request, exc: FactalignError):
        return _json({"error": str(exc)}, _status_for(exc))

    @app.exception_handler(ValueError)
    async def on_value_error(request: Request, exc: ValueError):
        return _json({"error": str(exc)}, 400)

    def threshold_now() -> float:
        return workbench.resolve_threshold(config, workspace)

    # -- record CRUD --------------------------------------------------------

    def register_crud(kind: str, segment: str) -> None:
        async def get_record(item_id: str) -> Response:
            return _json(encode_record(kind, workspace.require(kind, item_id)))

        async def put_record(item_id: str, request: Request) -> Response:
            payload = await request.json()
            if not isinstance(payload, dict):
                raise ValueError("payload must be a JSON object")
            try:
                record = decode_record(kind, payload)
            except (KeyError, TypeError) as exc:
                raise ValueError(f"invalid {kind} payload: {exc}") from exc
            stored_id = record_id(record)
            if stored_id != item_id:
                raise ValueError(
                    f"payload id {stored_id!r} does not match URL id {item_id!r}"
                )
            workspace.put(record)
            return _json({"id": stored_id})

        app.add_api_route(f"/{segment}/{{item_id}}", get_record, methods=["GET"])
        app.add_api_route(f"/{segment}/{{item_id}}", put_record, methods=["PUT"])

    for kind, segment in _KIND_SEGMENTS.items():
        register_crud(kind, segment)

    # -- pipeline and analytics ---------------------------------------------

    @app.post("/match")
    async def post_match(body: MatchRequest) -> Response:
        threshold = body.threshold if body.threshold is not None else threshold_now()
        result = workbench.match_view(
            workspace, provider, body.annotation_a, body.annotation_b, threshold
        )
        return _json(encode_match_result(result))

    @app.get("/heatmap")
    async def get_heatmap(
        document: str | None = None,
        round_id: str | None = Query(None, alias="round"),
    ) -> Response:
        matrix = workbench.heatmap_view(
            workspace, provider, threshold_now(),
            round_id=round_id, document_id=document,
        )
        return _json(encode_iaa_matrix(matrix))

    @app.get("/histogram")
    async def get_histogram(
        round_id: str | None = Query(None, alias="round"),
    ) -> Response:
        report = workbench.histogram_view(workspace, round_id=round_id)
        return _json(encode_fact_count_report(report))

    @app.get("/convergence")
    async def get_convergence() -> Response:
        points = workbench.convergence_view(workspace, provider, threshold_now())
        return _json([encode_convergence_point(p) for p in points])

    @app.get("/coverage")
    async def get_coverage(annotation: str) -> Response:
        report = workbench.coverage_view(workspace, annotation)
        return _json(encode_coverage_report(report))

    # -- graphs ---------------------------------------------------------------

    @app.get("/graphs/source")
    async def get_source_graph(document: str) -> Response:
        return _json(encode_graph(workbench.source_graph_view(workspace, document)))

    @app.get("/graphs/facts")
    async def get_fact_graphs(annotation: str) -> Response:
        graphs = workbench.fact_graphs_view(workspace, annotation)
        return _json([encode_graph(g) for g in graphs])

    @app.post("/graphs/diff")
    async def post_graph_diff(body: DiffRequest) -> Response:
        if (body.document is None) == (body.reference is None):
            raise ValueError("give exactly one of 'document' or 'reference'")
        if (body.annotation is None) == (body.candidate is None):
            raise ValueError("give exactly one of 'annotation' or 'candidate'")
        if body.document is not None:
            reference = workbench.source_graph_view(workspace, body.document)
        else:
            reference = decode_graph(body.reference)
        if body.annotation is not None:
            candidate = workbench.fact_list_graph_view(workspace, body.annotation)
        else:
            candidate = decode_graph(body.candidate)
        return _json(encode_graph_diff(graph_diff(reference, candidate)))

    # -- branching, calibration, consensus ------------------------------------

    @app.post("/branching/parse")
    async def post_branching_parse(body: ParseRequest) -> Response:
        language = body.language or config.language
        tree = parse_logic(body.sentence, language=language)
        variants = enumerate_decompositions(tree)
        return _json({
            "tree": encode_logic_tree(tree),
            "decompositions": [encode_decomposition(v) for v in variants],
        })

    @app.post("/calibrate")
    async def post_calibrate(body: CalibrateRequest) -> Response:
        report = workbench.calibrate_view(
            workspace, provider, body.gold_ids, body.grid_step
        )
        return _json(encode_calibration_report(report))

    @app.post("/consensus")
    async def post_consensus(body: ConsensusRequest) -> Response:
        quorum = body.quorum if body.quorum is not None else config.quorum
        facts = workbench.consensus_view(
            workspace, provider, body.round, config.clustering_threshold, quorum
        )
        return _json([encode_consensus_fact(f) for f in facts])

    return app
