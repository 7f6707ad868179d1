"""Batch report artifacts: plot-ready JSON, CSV tables, and PNG figures.

Every view that has data in the workspace is written three ways into the
output directory: canonical JSON (what the API would serve), a flat CSV for
spreadsheet users, and a rendered matplotlib figure. Views without data are
skipped rather than padded with empty files. Output is a pure function of
workspace state, so re-running on an unchanged workspace rewrites identical
JSON and CSV bytes.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .analytics import (
    ConvergencePoint,
    FactCountReport,
    IaaMatrix,
    encode_convergence_point,
    encode_fact_count_report,
    encode_iaa_matrix,
)
from .embedding import EmbeddingProvider
from .model import canonical_json
from .store import Workspace
from .workbench import convergence_view, histogram_view, workspace_heatmap

FIGURE_DPI = 150


def _write_json(path: Path, payload) -> None:
    path.write_text(canonical_json(payload) + "\n", encoding="utf-8")


def _heatmap_csv(path: Path, matrix: IaaMatrix) -> None:
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["annotator", *matrix.annotator_ids])
        for annotator_id, row in zip(matrix.annotator_ids, matrix.values):
            writer.writerow([annotator_id, *[repr(v) for v in row]])


def _heatmap_png(path: Path, matrix: IaaMatrix) -> None:
    n = len(matrix.annotator_ids)
    fig, ax = plt.subplots(figsize=(1.2 * n + 2.5, 1.2 * n + 1.5))
    image = ax.imshow(matrix.values, vmin=0.0, vmax=1.0, cmap="viridis")
    ax.set_xticks(range(n), labels=matrix.annotator_ids, rotation=45, ha="right")
    ax.set_yticks(range(n), labels=matrix.annotator_ids)
    for i in range(n):
        for j in range(n):
            value = matrix.values[i][j]
            ax.text(j, i, f"{value:.2f}", ha="center", va="center",
                    color="white" if value < 0.5 else "black", fontsize=8)
    ax.set_title(f"pairwise agreement ({matrix.scope})")
    fig.colorbar(image, ax=ax, label="IAA")
    fig.tight_layout()
    fig.savefig(path, dpi=FIGURE_DPI)
    plt.close(fig)


def _histogram_csv(path: Path, report: FactCountReport) -> None:
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["annotator_id", "document_id", "fact_count"])
        for annotator_id, document_id, count in report.counts:
            writer.writerow([annotator_id, document_id, count])


def _histogram_png(path: Path, report: FactCountReport) -> None:
    documents = sorted({doc for _, doc, _ in report.counts})
    annotators = sorted({annotator for annotator, _, _ in report.counts})
    lookup = {(a, d): c for a, d, c in report.counts}
    width = 0.8 / max(1, len(annotators))
    fig, ax = plt.subplots(figsize=(max(6.0, 1.5 * len(documents)), 4.5))
    for offset, annotator_id in enumerate(annotators):
        xs = [i + offset * width for i in range(len(documents))]
        heights = [lookup.get((annotator_id, doc), 0) for doc in documents]
        ax.bar(xs, heights, width=width, label=annotator_id)
    ax.set_xticks(
        [i + 0.4 - width / 2 for i in range(len(documents))], labels=documents,
        rotation=30, ha="right",
    )
    ax.set_ylabel("facts per annotation")
    ax.set_title("fact-count distribution")
    ax.legend(title="annotator", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=FIGURE_DPI)
    plt.close(fig)


def _convergence_csv(path: Path, points: list[ConvergencePoint]) -> None:
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["guideline_version_id", "mean_iaa", "median_iaa", "pair_count"])
        for point in points:
            writer.writerow([
                point.guideline_version_id, repr(point.mean_iaa),
                repr(point.median_iaa), point.pair_count,
            ])


def _convergence_png(path: Path, points: list[ConvergencePoint]) -> None:
    xs = range(len(points))
    fig, ax = plt.subplots(figsize=(max(6.0, 1.6 * len(points)), 4.0))
    ax.plot(xs, [p.mean_iaa for p in points], marker="o", label="mean IAA")
    ax.plot(xs, [p.median_iaa for p in points], marker="s", label="median IAA")
    ax.set_xticks(list(xs), labels=[p.guideline_version_id for p in points],
                  rotation=30, ha="right")
    ax.set_ylim(0.0, 1.05)
    ax.set_xlabel("guideline version")
    ax.set_ylabel("IAA")
    ax.set_title("agreement across rounds")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=FIGURE_DPI)
    plt.close(fig)


def write_report(
    workspace: Workspace,
    provider: EmbeddingProvider,
    out_dir: str | Path,
    *,
    threshold: float,
) -> list[Path]:
    """Write every renderable view to out_dir; returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    matrix = workspace_heatmap(workspace, provider, threshold)
    if matrix is not None:
        _write_json(out / "heatmap.json", encode_iaa_matrix(matrix))
        _heatmap_csv(out / "heatmap.csv", matrix)
        _heatmap_png(out / "heatmap.png", matrix)
        written += [out / "heatmap.json", out / "heatmap.csv", out / "heatmap.png"]

    histogram = histogram_view(workspace)
    if histogram.counts:
        _write_json(out / "histogram.json", encode_fact_count_report(histogram))
        _histogram_csv(out / "histogram.csv", histogram)
        _histogram_png(out / "histogram.png", histogram)
        written += [out / "histogram.json", out / "histogram.csv", out / "histogram.png"]

    points = convergence_view(workspace, provider, threshold)
    if points:
        _write_json(out / "convergence.json", [encode_convergence_point(p) for p in points])
        _convergence_csv(out / "convergence.csv", points)
        _convergence_png(out / "convergence.png", points)
        written += [
            out / "convergence.json", out / "convergence.csv", out / "convergence.png",
        ]

    return written
