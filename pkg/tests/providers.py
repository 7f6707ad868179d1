"""Test-only embedding providers with hand-placed vectors."""

from __future__ import annotations

import math
from typing import Mapping, Sequence


class DictProvider:
    """Maps known texts to fixed raw vectors; anything else is an error."""

    def __init__(self, vectors: Mapping[str, Sequence[float]], provider_id: str = "dict-v1"):
        self.vectors = {k: list(v) for k, v in vectors.items()}
        dims = {len(v) for v in self.vectors.values()}
        if len(dims) != 1:
            raise ValueError("all vectors must share one dimension")
        self.dimension = dims.pop()
        self.id = provider_id

    def embed_raw(self, texts):
        return [self.vectors[t] for t in texts]


def planted_pairs(sims: Sequence[float], prefix_a: str = "a", prefix_b: str = "b") -> DictProvider:
    """Provider where text f"{prefix_a}{k}" and f"{prefix_b}{k}" have cosine
    similarity exactly sims[k], and every cross-k similarity is exactly 0.

    Uses one orthogonal 2-plane per pair: a_k is a basis vector, b_k lies in
    the same plane at the requested angle. Unit normalization perturbs the
    realized similarity by a few ulp at most, so keep requested sims at
    least ~1e-3 away from any threshold the test compares against. Cross-pair
    similarities are exactly 0.0 (disjoint support survives normalization).
    """
    dim = max(2 * len(sims), 2)
    vectors: dict[str, list[float]] = {}
    for k, s in enumerate(sims):
        if not 0.0 <= s <= 1.0:
            raise ValueError("similarities must lie in [0, 1]")
        a = [0.0] * dim
        a[2 * k] = 1.0
        b = [0.0] * dim
        b[2 * k] = s
        b[2 * k + 1] = math.sqrt(max(0.0, 1.0 - s * s))
        vectors[f"{prefix_a}{k}"] = a
        vectors[f"{prefix_b}{k}"] = b
    return DictProvider(vectors)
