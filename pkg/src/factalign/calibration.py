"""Similarity-threshold calibration against human-judged fact matchings.

A gold matching records which fact pairs between two annotations a human
judged to be the same fact. Sweeping a threshold grid over the pipeline's
assignments and scoring each grid point by deviation from the gold pairs
gives an empirically optimized threshold, and the same machinery ranks
embedding providers by their best achievable agreement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from .embedding import EmbeddingCache, EmbeddingProvider, embed_texts
from .errors import EmptyGoldSet
from .matching import optimal_assignment, similarity_matrix
from .model import Annotation

DEFAULT_GRID_STEP = 0.01


@dataclass(frozen=True)
class GoldMatching:
    """Human-judged correspondences between the facts of two annotations."""

    annotation_a_id: str
    annotation_b_id: str
    pairs: frozenset[tuple[int, int]]

    def __post_init__(self):
        pairs = frozenset((int(i), int(j)) for i, j in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        left = [i for i, _ in pairs]
        right = [j for _, j in pairs]
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise ValueError("gold pairs must use each fact index at most once per side")
        if any(i < 0 for i in left) or any(j < 0 for j in right):
            raise ValueError("gold pair indices must be non-negative")


@dataclass(frozen=True)
class CalibrationReport:
    best_threshold: float
    objective_curve: tuple[tuple[float, float], ...]
    gold_count: int


def pair_deviation(
    predicted: frozenset[tuple[int, int]] | set[tuple[int, int]],
    gold: frozenset[tuple[int, int]] | set[tuple[int, int]],
) -> float:
    """1 minus the F1 score of predicted pairs against gold pairs.

    Both empty counts as perfect agreement (0.0). With one side empty and
    the other not, F1 is 0 and the deviation is 1.0.
    """
    predicted = frozenset(predicted)
    gold = frozenset(gold)
    if not predicted and not gold:
        return 0.0
    hits = len(predicted & gold)
    denom = len(predicted) + len(gold)
    f1 = 2.0 * hits / denom
    return 1.0 - f1


def _threshold_grid(grid_step: float) -> list[float]:
    if not 0.0 < grid_step <= 0.1:
        raise ValueError(f"grid_step must be in (0, 0.1], got {grid_step}")
    points = []
    k = 0
    while True:
        t = k * grid_step
        if t >= 1.0 - 1e-12:
            break
        points.append(t)
        k += 1
    points.append(1.0)
    return points


def _scored_pairs(
    gold: GoldMatching,
    annotations: Mapping[str, Annotation],
    provider: EmbeddingProvider,
    cache: EmbeddingCache | None,
) -> list[tuple[int, int, float]]:
    """Assignment pairs for one gold's annotations as (a_idx, b_idx, similarity).

    The matrix and assignment are computed once; threshold filtering happens
    later per grid point. Annotations are processed in the same canonical id
    order the matcher uses, so the filtered pairs at any threshold equal what
    match_annotations would report.
    """
    try:
        ann_a = annotations[gold.annotation_a_id]
        ann_b = annotations[gold.annotation_b_id]
    except KeyError as exc:
        raise ValueError(f"gold matching references unknown annotation {exc.args[0]!r}") from exc
    texts_a = [f.text for f in ann_a.facts]
    texts_b = [f.text for f in ann_b.facts]
    for i, j in gold.pairs:
        if i >= len(texts_a) or j >= len(texts_b):
            raise ValueError(
                f"gold pair ({i}, {j}) out of range for annotations with "
                f"{len(texts_a)} and {len(texts_b)} facts"
            )
    swapped = ann_b.id < ann_a.id
    first, second = (texts_b, texts_a) if swapped else (texts_a, texts_b)
    embeds_first = embed_texts(provider, first, cache=cache)
    embeds_second = embed_texts(provider, second, cache=cache)
    matrix = similarity_matrix(embeds_first, embeds_second)
    assignment = optimal_assignment(matrix)
    if swapped:
        return [(c, r, float(matrix[r, c])) for r, c in assignment]
    return [(r, c, float(matrix[r, c])) for r, c in assignment]


def calibrate_threshold(
    golds: Sequence[GoldMatching],
    provider: EmbeddingProvider,
    grid_step: float = DEFAULT_GRID_STEP,
    *,
    annotations: Mapping[str, Annotation],
    cache: EmbeddingCache | None = None,
) -> CalibrationReport:
    """Grid-search the threshold minimizing mean deviation from gold matchings.

    Assignments depend on the similarity matrix only, so each gold pair is
    matched once and re-filtered per grid point. Ties go to the lowest
    threshold, which keeps more matches.
    """
    if not golds:
        raise EmptyGoldSet("empty gold set")
    grid = _threshold_grid(grid_step)
    scored = [_scored_pairs(g, annotations, provider, cache) for g in golds]

    curve: list[tuple[float, float]] = []
    for t in grid:
        deviations = []
        for gold, pairs in zip(golds, scored):
            predicted = frozenset((i, j) for i, j, sim in pairs if sim >= t)
            deviations.append(pair_deviation(predicted, gold.pairs))
        curve.append((t, math.fsum(deviations) / len(deviations)))

    best_threshold, best_value = curve[0]
    for t, value in curve[1:]:
        if value < best_value:
            best_threshold, best_value = t, value
    return CalibrationReport(
        best_threshold=best_threshold,
        objective_curve=tuple(curve),
        gold_count=len(golds),
    )


def evaluate_provider(
    golds: Sequence[GoldMatching],
    provider: EmbeddingProvider,
    grid_step: float = DEFAULT_GRID_STEP,
    *,
    annotations: Mapping[str, Annotation],
    cache: EmbeddingCache | None = None,
) -> float:
    """Best achievable mean deviation for a provider; lower aligns closer
    with the human matchings."""
    report = calibrate_threshold(
        golds, provider, grid_step, annotations=annotations, cache=cache
    )
    return min(value for _, value in report.objective_curve)


def encode_gold_matching(gold: GoldMatching) -> dict[str, Any]:
    return {
        "annotation_a_id": gold.annotation_a_id,
        "annotation_b_id": gold.annotation_b_id,
        "pairs": [list(p) for p in sorted(gold.pairs)],
    }


def decode_gold_matching(payload: Mapping[str, Any]) -> GoldMatching:
    return GoldMatching(
        annotation_a_id=payload["annotation_a_id"],
        annotation_b_id=payload["annotation_b_id"],
        pairs=frozenset((int(i), int(j)) for i, j in payload["pairs"]),
    )


def encode_calibration_report(report: CalibrationReport) -> dict[str, Any]:
    return {
        "best_threshold": report.best_threshold,
        "objective_curve": [[t, v] for t, v in report.objective_curve],
        "gold_count": report.gold_count,
    }


def decode_calibration_report(payload: Mapping[str, Any]) -> CalibrationReport:
    return CalibrationReport(
        best_threshold=float(payload["best_threshold"]),
        objective_curve=tuple((float(t), float(v)) for t, v in payload["objective_curve"]),
        gold_count=int(payload["gold_count"]),
    )
