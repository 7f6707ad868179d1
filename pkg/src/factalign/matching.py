"""Fact-list matching: similarity matrix, optimal assignment, threshold, Jaccard IAA.

The agreement score for two fact lists is computed in four steps: pairwise
cosine similarities, a maximum-similarity one-to-one assignment, a threshold
that discards low-quality matches, and Jaccard over matched vs. total facts.
All steps are pure functions over immutable inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .embedding import EmbeddingCache, EmbeddingProvider, embed_texts
from .errors import DimensionMismatch, InvalidCounts, NonFiniteEntry
from .model import Annotation

DEFAULT_THRESHOLD = 0.7

# Reduced costs within this of zero count as tied; similarity is O(1) scale.
TIE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class MatchResult:
    """Outcome of matching two annotations' fact lists.

    ``matrix`` is |A| x |B| cosine similarities, ``assignment`` the optimal
    one-to-one pairing (row-sorted), ``matches`` its subset at or above
    ``threshold``, and ``iaa`` the Jaccard agreement in [0, 1].
    """

    annotation_a_id: str
    annotation_b_id: str
    matrix: np.ndarray
    assignment: tuple[tuple[int, int], ...]
    matches: tuple[tuple[int, int], ...]
    threshold: float
    iaa: float


def similarity_matrix(
    embeds_a: Sequence[np.ndarray], embeds_b: Sequence[np.ndarray]
) -> np.ndarray:
    """Pairwise cosine similarities; entry [i][j] compares a_i with b_j.

    Vectors are unit-norm, so cosine is the plain dot product, clamped to
    [-1, 1]. Bit-identical vector pairs are pinned to exactly 1.0.
    """
    rows, cols = len(embeds_a), len(embeds_b)
    if rows == 0 or cols == 0:
        return np.zeros((rows, cols), dtype=np.float64)
    a = np.stack([np.asarray(v, dtype=np.float64) for v in embeds_a])
    b = np.stack([np.asarray(v, dtype=np.float64) for v in embeds_b])
    if a.shape[1] != b.shape[1]:
        raise DimensionMismatch(f"embedding dimensions differ: {a.shape[1]} vs {b.shape[1]}")
    matrix = np.clip(a @ b.T, -1.0, 1.0)
    identical_cols: dict[bytes, list[int]] = {}
    for j in range(cols):
        identical_cols.setdefault(b[j].tobytes(), []).append(j)
    for i in range(rows):
        for j in identical_cols.get(a[i].tobytes(), ()):
            matrix[i, j] = 1.0
    return matrix


def _hungarian_square(cost: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Minimum-cost perfect assignment on a square matrix via shortest
    augmenting paths with potentials.

    Returns (p, u, v) where p[j] (1-based) is the row matched to column j and
    u, v are the dual potentials satisfying u[i] + v[j] <= cost[i-1][j-1].
    """
    n = cost.shape[0]
    u = np.zeros(n + 1, dtype=np.float64)
    v = np.zeros(n + 1, dtype=np.float64)
    p = np.zeros(n + 1, dtype=np.int64)
    way = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf, dtype=np.float64)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = int(p[j0])
            free = np.nonzero(~used[1:])[0]  # zero-based column indices
            cur = cost[i0 - 1, free] - u[i0] - v[free + 1]
            better = cur < minv[free + 1]
            minv[free[better] + 1] = cur[better]
            way[free[better] + 1] = j0
            pick = int(np.argmin(minv[free + 1]))
            j1 = int(free[pick]) + 1
            delta = minv[j1]
            u[p[used]] += delta
            v[used] -= delta
            minv[~used] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = int(way[j0])
            p[j0] = p[j1]
            j0 = j1
    return p, u, v


def _cover_rows(adj: dict[int, list[int]], rows: Sequence[int]) -> dict[int, int] | None:
    """Kuhn's algorithm: match every row to a distinct column, or None."""
    col_owner: dict[int, int] = {}

    def extend(row: int, visited: set[int]) -> bool:
        for col in adj.get(row, ()):
            if col in visited:
                continue
            visited.add(col)
            if col not in col_owner or extend(col_owner[col], visited):
                col_owner[col] = row
                return True
        return False

    for row in rows:
        if not extend(row, set()):
            return None
    return {row: col for col, row in col_owner.items()}


def _lex_smallest_assignment(
    tight: np.ndarray, base: dict[int, int], n_rows: int, n_cols: int
) -> list[tuple[int, int]]:
    """Pick, among optimal assignments, the lexicographically smallest
    row-sorted (row, col) sequence over the real (unpadded) region.

    ``tight`` is the square boolean matrix of zero-reduced-cost edges; every
    optimal assignment is a perfect matching inside it. ``base`` maps each
    row to its column in one known optimal matching.
    """
    n = tight.shape[0]
    real_limit = min(n_rows, n_cols)
    tight_cols = [list(np.nonzero(tight[r])[0]) for r in range(n)]
    current = dict(base)
    fixed: list[tuple[int, int]] = []
    fixed_rows: set[int] = set()
    used_cols: set[int] = set()
    padded_only: set[int] = set()  # rows committed to padded columns
    last_row = -1
    while len(fixed) < real_limit:
        default_row, default_col = min(
            (r, c) for r, c in current.items() if last_row < r < n_rows and c < n_cols
        )
        chosen: tuple[int, int] | None = None
        for row in range(last_row + 1, default_row + 1):
            col_cap = default_col if row == default_row else n_cols
            for col in tight_cols[row]:
                if col >= col_cap:
                    break
                if col in used_cols:
                    continue
                replacement = _matching_with(
                    tight_cols, n, n_cols, fixed_rows, used_cols, padded_only,
                    last_row, row, col,
                )
                if replacement is not None:
                    chosen = (row, col)
                    current = replacement
                    break
            if chosen is not None:
                break
        if chosen is None:
            chosen = (default_row, default_col)
        row, col = chosen
        padded_only.update(r for r in range(last_row + 1, row) if r not in fixed_rows)
        fixed.append(chosen)
        fixed_rows.add(row)
        used_cols.add(col)
        last_row = row
    return fixed


def _matching_with(
    tight_cols: list[list[int]],
    n: int,
    n_cols: int,
    fixed_rows: set[int],
    used_cols: set[int],
    padded_only: set[int],
    last_row: int,
    cand_row: int,
    cand_col: int,
) -> dict[int, int] | None:
    """Perfect tight matching that fixes (cand_row, cand_col) and parks every
    unfixed row in (last_row, cand_row) on padded columns; None if impossible.
    """
    adj: dict[int, list[int]] = {}
    remaining: list[int] = []
    for row in range(n):
        if row in fixed_rows or row == cand_row:
            continue
        remaining.append(row)
        cols = [c for c in tight_cols[row] if c not in used_cols and c != cand_col]
        if row in padded_only or last_row < row < cand_row:
            cols = [c for c in cols if c >= n_cols]
        adj[row] = cols
    cover = _cover_rows(adj, remaining)
    if cover is None:
        return None
    cover[cand_row] = cand_col
    return cover


def optimal_assignment(matrix: np.ndarray | Sequence[Sequence[float]]) -> list[tuple[int, int]]:
    """Maximum-total-similarity one-to-one assignment of size min(rows, cols).

    Maximization runs as cost minimization on 1 - similarity after padding
    rectangular inputs to square with cost-1 entries; padded pairs are
    discarded. Ties between optimal assignments break to the
    lexicographically smallest row-sorted pair sequence, so results are
    reproducible across runs and platforms.
    """
    mat = np.asarray(matrix, dtype=np.float64)
    if mat.ndim != 2:
        mat = mat.reshape((mat.shape[0] if mat.size else 0, 0))
    n_rows, n_cols = mat.shape
    if n_rows == 0 or n_cols == 0:
        return []
    if not np.isfinite(mat).all():
        raise NonFiniteEntry("similarity matrix contains NaN or infinite entries")
    n = max(n_rows, n_cols)
    cost = np.ones((n, n), dtype=np.float64)
    cost[:n_rows, :n_cols] = 1.0 - mat
    p, u, v = _hungarian_square(cost)
    base = {int(p[j]) - 1: j - 1 for j in range(1, n + 1)}
    reduced = cost - u[1:, None] - v[None, 1:]
    tight = np.abs(reduced) <= TIE_TOLERANCE
    return _lex_smallest_assignment(tight, base, n_rows, n_cols)


def filter_matches(
    assignment: Sequence[tuple[int, int]],
    matrix: np.ndarray | Sequence[Sequence[float]],
    threshold: float,
) -> list[tuple[int, int]]:
    """Keep exactly the assignment pairs with similarity >= threshold, in order."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")
    mat = np.asarray(matrix, dtype=np.float64)
    return [(r, c) for r, c in assignment if mat[r, c] >= threshold]


def jaccard_iaa(size_a: int, size_b: int, match_count: int) -> float:
    """Jaccard agreement: matched facts over the union of both fact lists.

    Matched pairs count once for both sides, giving m / (|A| + |B| - m).
    Two annotators who both extract nothing agree perfectly (1.0).
    """
    if size_a < 0 or size_b < 0:
        raise InvalidCounts(f"negative fact counts ({size_a}, {size_b})")
    if match_count < 0 or match_count > min(size_a, size_b):
        raise InvalidCounts(
            f"match count {match_count} outside [0, min({size_a}, {size_b})]"
        )
    if size_a + size_b == 0:
        return 1.0
    return match_count / (size_a + size_b - match_count)


def match_fact_texts(
    texts_a: Sequence[str],
    texts_b: Sequence[str],
    provider: EmbeddingProvider,
    threshold: float,
    cache: EmbeddingCache | None = None,
) -> tuple[np.ndarray, list[tuple[int, int]], list[tuple[int, int]], float]:
    """Run the pipeline on raw fact texts; building block for match_annotations."""
    embeds = embed_texts(provider, list(texts_a) + list(texts_b), cache)
    matrix = similarity_matrix(embeds[: len(texts_a)], embeds[len(texts_a):])
    assignment = optimal_assignment(matrix)
    matches = filter_matches(assignment, matrix, threshold)
    iaa = jaccard_iaa(len(texts_a), len(texts_b), len(matches))
    return matrix, assignment, matches, iaa


def match_annotations(
    a: Annotation,
    b: Annotation,
    provider: EmbeddingProvider,
    threshold: float = DEFAULT_THRESHOLD,
    cache: EmbeddingCache | None = None,
) -> MatchResult:
    """Embed, assign, filter, and score two annotations' fact lists.

    Internally the pair is put into a canonical order (lower annotation id
    first) and the result transposed back, so the IAA of (a, b) and (b, a)
    is exactly equal even when similarity ties allow several optimal
    assignments.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")
    swapped = b.id < a.id
    first, second = (b, a) if swapped else (a, b)
    matrix, assignment, matches, iaa = match_fact_texts(
        [f.text for f in first.facts],
        [f.text for f in second.facts],
        provider,
        threshold,
        cache,
    )
    if swapped:
        matrix = matrix.T.copy()
        assignment = sorted((c, r) for r, c in assignment)
        matches = sorted((c, r) for r, c in matches)
    matrix.flags.writeable = False
    return MatchResult(
        annotation_a_id=a.id,
        annotation_b_id=b.id,
        matrix=matrix,
        assignment=tuple(assignment),
        matches=tuple(matches),
        threshold=threshold,
        iaa=iaa,
    )


def encode_match_result(result: MatchResult) -> dict[str, Any]:
    """Row-major JSON form consumed by the heatmap view and CLI reports."""
    return {
        "annotation_a_id": result.annotation_a_id,
        "annotation_b_id": result.annotation_b_id,
        "matrix": {
            "rows": int(result.matrix.shape[0]),
            "cols": int(result.matrix.shape[1]),
            "values": [[float(x) for x in row] for row in result.matrix],
        },
        "assignment": [[r, c] for r, c in result.assignment],
        "matches": [[r, c] for r, c in result.matches],
        "threshold": result.threshold,
        "iaa": result.iaa,
    }
