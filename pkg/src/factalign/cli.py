"""Command-line front end: the batch mirror of the HTTP API.

Exit codes: 0 on success, 1 when the input or workspace content is invalid,
2 when storage, the filesystem, or the embedding provider fails.
"""

from __future__ import annotations

import functools
import json
import sys
from dataclasses import replace
from pathlib import Path

import click

from . import workbench
from .analytics import (
    encode_consensus_fact,
    encode_convergence_point,
    encode_fact_count_report,
    encode_iaa_matrix,
)
from .calibration import encode_calibration_report
from .config import THRESHOLD_SETTING, ServiceConfig, load_config, make_provider
from .embedding import EmbeddingProvider
from .errors import (
    DimensionMismatch,
    FactalignError,
    IntegrityViolation,
    ProviderUnavailable,
    StorageFailure,
    UnknownRecord,
)
from .matching import encode_match_result
from .model import Document, canonical_json
from .store import Workspace, decode_record

EXIT_VALIDATION = 1
EXIT_IO = 2

_IMPORT_ORDER = (
    ("document", "documents"),
    ("annotator", "annotators"),
    ("guideline", "guidelines"),
    ("annotation", "annotations"),
    ("round", "rounds"),
    ("gold", "golds"),
)


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, (UnknownRecord, IntegrityViolation)):
        return EXIT_VALIDATION
    if isinstance(exc, (ProviderUnavailable, DimensionMismatch, StorageFailure, OSError)):
        return EXIT_IO
    return EXIT_VALIDATION


def _guarded(fn):
    """Map domain errors to the documented exit codes instead of tracebacks."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (FactalignError, ValueError, KeyError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(_exit_code(exc))

    return wrapper


@click.group()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
              help="TOML config file (default: ./factalign.toml if present).")
@click.option("--workspace", "workspace_path", type=click.Path(file_okay=False),
              default=None, help="Workspace directory, overriding config and env.")
@click.pass_context
def main(ctx: click.Context, config_path: str | None, workspace_path: str | None) -> None:
    """Fact matching, agreement analytics, and disagreement views."""
    ctx.obj = {"config_path": config_path, "workspace_path": workspace_path}


def _load(ctx: click.Context) -> ServiceConfig:
    config = load_config(ctx.obj["config_path"])
    if ctx.obj["workspace_path"]:
        config = replace(config, workspace=ctx.obj["workspace_path"])
    return config


def _open(ctx: click.Context) -> tuple[ServiceConfig, Workspace, EmbeddingProvider]:
    config = _load(ctx)
    return config, Workspace(config.workspace), make_provider(config)


@main.command("import")
@click.argument("directory", type=click.Path())
@click.pass_context
@_guarded
def import_documents(ctx: click.Context, directory: str) -> None:
    """Store one document per .txt or .json file in DIRECTORY.

    A .txt file becomes a document whose id is the file stem; a .json file
    must hold a full document record. Other files are ignored.
    """
    _, workspace, _ = _open(ctx)
    root = Path(directory)
    if not root.is_dir():
        raise StorageFailure(f"not a directory: {directory}")
    count = 0
    for path in sorted(root.iterdir()):
        if path.suffix == ".txt":
            document = Document(id=path.stem, text=path.read_text(encoding="utf-8"))
        elif path.suffix == ".json":
            payload = json.loads(path.read_text(encoding="utf-8"))
            try:
                document = decode_record("document", payload)
            except (KeyError, TypeError) as exc:
                raise ValueError(f"invalid document in {path.name}: {exc}") from exc
        else:
            continue
        workspace.put(document)
        count += 1
    click.echo(f"imported {count} documents")


@main.command("annotate-import")
@click.argument("file", type=click.Path())
@click.pass_context
@_guarded
def annotate_import(ctx: click.Context, file: str) -> None:
    """Store annotation records from FILE (external fact lists).

    FILE holds either a JSON list of annotation records or an object with
    any of the keys documents, annotators, guidelines, annotations, rounds,
    golds; bundled records are stored in dependency order.
    """
    _, workspace, _ = _open(ctx)
    payload = json.loads(Path(file).read_text(encoding="utf-8"))
    if isinstance(payload, list):
        payload = {"annotations": payload}
    if not isinstance(payload, dict):
        raise ValueError("expected a JSON object or a list of annotation records")
    unknown = set(payload) - {key for _, key in _IMPORT_ORDER}
    if unknown:
        raise ValueError(f"unknown import keys: {sorted(unknown)}")
    parts = []
    for kind, key in _IMPORT_ORDER:
        records = payload.get(key, [])
        if not isinstance(records, list):
            raise ValueError(f"{key} must be a list")
        for entry in records:
            try:
                record = decode_record(kind, entry)
            except (KeyError, TypeError) as exc:
                raise ValueError(f"invalid {kind} payload: {exc}") from exc
            workspace.put(record)
        if records:
            parts.append(f"{len(records)} {key}")
    click.echo("imported " + (", ".join(parts) if parts else "nothing"))


@main.command()
@click.argument("annotation_a")
@click.argument("annotation_b")
@click.option("--threshold", type=float, default=None,
              help="Similarity cutoff; default comes from settings/config.")
@click.pass_context
@_guarded
def match(ctx: click.Context, annotation_a: str, annotation_b: str,
          threshold: float | None) -> None:
    """Match two annotations' facts and print the MatchResult as JSON."""
    config, workspace, provider = _open(ctx)
    if threshold is None:
        threshold = workbench.resolve_threshold(config, workspace)
    result = workbench.match_view(workspace, provider, annotation_a, annotation_b, threshold)
    click.echo(canonical_json(encode_match_result(result)))


@main.command()
@click.option("--document", default=None, help="Limit to one document.")
@click.option("--round", "round_id", default=None, help="Limit to one round.")
@click.pass_context
@_guarded
def heatmap(ctx: click.Context, document: str | None, round_id: str | None) -> None:
    """Print the pairwise agreement matrix for a document and/or round."""
    config, workspace, provider = _open(ctx)
    matrix = workbench.heatmap_view(
        workspace, provider, workbench.resolve_threshold(config, workspace),
        round_id=round_id, document_id=document,
    )
    click.echo(canonical_json(encode_iaa_matrix(matrix)))


@main.command()
@click.option("--round", "round_id", default=None, help="Limit to one round.")
@click.pass_context
@_guarded
def histogram(ctx: click.Context, round_id: str | None) -> None:
    """Print fact counts per annotator and document."""
    _, workspace, _ = _open(ctx)
    report = workbench.histogram_view(workspace, round_id=round_id)
    click.echo(canonical_json(encode_fact_count_report(report)))


@main.command()
@click.pass_context
@_guarded
def convergence(ctx: click.Context) -> None:
    """Print per-round agreement, ordered by guideline version."""
    config, workspace, provider = _open(ctx)
    points = workbench.convergence_view(
        workspace, provider, workbench.resolve_threshold(config, workspace)
    )
    click.echo(canonical_json([encode_convergence_point(p) for p in points]))


@main.command()
@click.argument("gold_ids", nargs=-1)
@click.option("--grid-step", type=float, default=None, help="Threshold grid spacing.")
@click.option("--apply", "apply_threshold", is_flag=True,
              help="Store the calibrated threshold in the workspace settings.")
@click.pass_context
@_guarded
def calibrate(ctx: click.Context, gold_ids: tuple[str, ...],
              grid_step: float | None, apply_threshold: bool) -> None:
    """Grid-search the matching threshold against gold matchings.

    With no GOLD_IDS every stored gold matching is used.
    """
    config, workspace, provider = _open(ctx)
    ids = list(gold_ids) or workspace.list_ids("gold")
    report = workbench.calibrate_view(workspace, provider, ids, grid_step)
    click.echo(canonical_json(encode_calibration_report(report)))
    if apply_threshold:
        workspace.set_setting(THRESHOLD_SETTING, report.best_threshold)
        click.echo(f"threshold set to {report.best_threshold}", err=True)


@main.command()
@click.argument("round_id", metavar="ROUND")
@click.option("--quorum", type=float, default=None,
              help="Fraction of annotators a cluster needs; default from config.")
@click.pass_context
@_guarded
def consensus(ctx: click.Context, round_id: str, quorum: float | None) -> None:
    """Print majority-vote consensus facts for a round."""
    config, workspace, provider = _open(ctx)
    facts = workbench.consensus_view(
        workspace, provider, round_id, config.clustering_threshold,
        quorum if quorum is not None else config.quorum,
    )
    click.echo(canonical_json([encode_consensus_fact(f) for f in facts]))


@main.command()
@click.argument("out_dir", type=click.Path(file_okay=False))
@click.pass_context
@_guarded
def report(ctx: click.Context, out_dir: str) -> None:
    """Write plot-ready JSON, CSV tables, and PNG figures to OUT_DIR."""
    from .report import write_report

    config, workspace, provider = _open(ctx)
    written = write_report(
        workspace, provider, out_dir,
        threshold=workbench.resolve_threshold(config, workspace),
    )
    for path in written:
        click.echo(str(path))


@main.command()
@click.option("--host", default=None, help="Bind address; default from config.")
@click.option("--port", type=int, default=None, help="Port; default from config.")
@click.pass_context
@_guarded
def serve(ctx: click.Context, host: str | None, port: int | None) -> None:
    """Run the HTTP API server."""
    import uvicorn

    from .api import create_app

    config = _load(ctx)
    app = create_app(config)
    uvicorn.run(app, host=host or config.host, port=port or config.port)


if __name__ == "__main__":
    main()
