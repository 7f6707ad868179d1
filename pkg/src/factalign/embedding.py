"""Unit-norm text embeddings through pluggable providers, with a persistent cache.

Providers are deterministic by contract: the same provider id and the same
input text must always yield the same vector. The built-in trigram embedder
is deterministic by construction; remote providers satisfy the contract
through the content-addressed cache.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
from typing import Protocol, Sequence

import httpx
import numpy as np

from .errors import DimensionMismatch, EmptyText, ProviderUnavailable

NORM_TOLERANCE = 1e-6


class EmbeddingProvider(Protocol):
    """Anything that maps texts to fixed-dimension raw vectors."""

    id: str
    dimension: int

    def embed_raw(self, texts: Sequence[str]) -> list[list[float]]:
        """Return one vector (any norm) per text, order-preserving."""
        ...


def _normalize(values: Sequence[float], dimension: int) -> np.ndarray:
    vec = np.asarray(values, dtype=np.float64)
    if vec.shape != (dimension,):
        raise DimensionMismatch(
            f"provider returned vector of length {vec.shape}, expected ({dimension},)"
        )
    norm = float(np.linalg.norm(vec))
    if not np.isfinite(norm) or norm == 0.0:
        raise DimensionMismatch("provider returned a zero or non-finite vector")
    unit = vec / norm
    unit.flags.writeable = False
    return unit


def text_sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class TrigramEmbedder:
    """Offline deterministic fallback: hashed character-trigram frequencies.

    The text is padded with boundary markers so even single-character inputs
    produce at least one trigram. Bucketing uses blake2b, not Python's
    ``hash``, so vectors are stable across processes and platforms. Texts
    sharing no trigram get cosine similarity exactly 0 (all counts are
    non-negative with disjoint support, collisions aside).
    """

    def __init__(self, dimension: int = 256):
        if dimension < 16:
            raise ValueError(f"dimension must be >= 16, got {dimension}")
        self.dimension = dimension
        self.id = f"trigram-v1-{dimension}"

    def embed_raw(self, texts: Sequence[str]) -> list[list[float]]:
        return [self._embed_one(t) for t in texts]

    def _embed_one(self, text: str) -> list[float]:
        if not text.strip():
            raise EmptyText("cannot embed an empty string")
        padded = f"\x02\x02{text}\x03\x03"
        counts = np.zeros(self.dimension, dtype=np.float64)
        for i in range(len(padded) - 2):
            trigram = padded[i : i + 3]
            counts[self.bucket(trigram)] += 1.0
        return counts.tolist()

    def bucket(self, trigram: str) -> int:
        digest = hashlib.blake2b(trigram.encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "big") % self.dimension


class RemoteEmbedder:
    """Client for the minimal HTTP embedding protocol.

    POST ``{base_url}/embed`` with ``{"texts": [...]}``; the service answers
    ``{"vectors": [[...], ...]}``. Any embedding model can be attached behind
    this protocol with a thin adapter.
    """

    def __init__(self, base_url: str, dimension: int, *, provider_id: str | None = None,
                 timeout: float = 30.0):
        self.base_url = base_url.rstrip("/")
        self.dimension = dimension
        self.timeout = timeout
        self.id = provider_id or f"remote-{hashlib.sha256(self.base_url.encode()).hexdigest()[:12]}"
        self._client: httpx.Client | None = None

    def _http(self) -> httpx.Client:
        if self._client is None:
            self._client = httpx.Client(timeout=self.timeout)
        return self._client

    def embed_raw(self, texts: Sequence[str]) -> list[list[float]]:
        try:
            response = self._http().post(f"{self.base_url}/embed", json={"texts": list(texts)})
            response.raise_for_status()
            payload = response.json()
        except (httpx.HTTPError, ValueError) as exc:
            raise ProviderUnavailable(f"embedding service at {self.base_url}: {exc}") from exc
        vectors = payload.get("vectors")
        if not isinstance(vectors, list) or len(vectors) != len(texts):
            raise ProviderUnavailable(
                f"embedding service returned {0 if not isinstance(vectors, list) else len(vectors)} "
                f"vectors for {len(texts)} texts"
            )
        return vectors


class EmbeddingCache:
    """Content-addressed vector cache, optionally persisted as JSON lines.

    Keys are (provider id, sha256 of text), so identical fact texts across
    annotators embed once. Writes append one record per line; a cache hit
    returns bit-identical values to the original computation because the
    stored floats round-trip exactly through JSON repr.
    """

    def __init__(self, path: str | os.PathLike[str] | None = None):
        self.path = os.fspath(path) if path is not None else None
        self._entries: dict[tuple[str, str], np.ndarray] = {}
        self._lock = threading.Lock()
        if self.path is not None and os.path.exists(self.path):
            self._load()

    def _load(self) -> None:
        assert self.path is not None
        with open(self.path, "r", encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if not line:
                    continue
                record = json.loads(line)
                vec = np.asarray(record["vector"], dtype=np.float64)
                vec.flags.writeable = False
                self._entries[(record["provider"], record["text_sha256"])] = vec

    def get(self, provider_id: str, digest: str) -> np.ndarray | None:
        return self._entries.get((provider_id, digest))

    def put(self, provider_id: str, digest: str, vector: np.ndarray) -> None:
        with self._lock:
            self._entries[(provider_id, digest)] = vector
            if self.path is None:
                return
            record = {
                "provider": provider_id,
                "text_sha256": digest,
                "vector": vector.tolist(),
            }
            os.makedirs(os.path.dirname(self.path) or ".", exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as handle:
                handle.write(json.dumps(record, ensure_ascii=False) + "\n")
                handle.flush()

    def __len__(self) -> int:
        return len(self._entries)


def embed_texts(
    provider: EmbeddingProvider,
    texts: Sequence[str],
    cache: EmbeddingCache | None = None,
) -> list[np.ndarray]:
    """Embed ``texts`` as unit vectors, order-preserving, write-through cached.

    Raises EmptyText for blank inputs, ProviderUnavailable when a remote
    provider cannot be reached and the cache has no entry, and
    DimensionMismatch when the provider returns vectors of the wrong length.
    """
    for text in texts:
        if not text.strip():
            raise EmptyText("cannot embed an empty string")
    digests = [text_sha256(t) for t in texts]
    results: list[np.ndarray | None] = [None] * len(texts)
    misses: dict[str, list[int]] = {}
    for i, digest in enumerate(digests):
        cached = cache.get(provider.id, digest) if cache is not None else None
        if cached is not None:
            results[i] = cached
        else:
            misses.setdefault(digest, []).append(i)
    if misses:
        # One provider call per unique missing text, batched together.
        unique = list(misses)
        index_of = {d: k for k, d in enumerate(unique)}
        batch = [texts[misses[d][0]] for d in unique]
        raw = provider.embed_raw(batch)
        if len(raw) != len(batch):
            raise DimensionMismatch(
                f"provider returned {len(raw)} vectors for {len(batch)} texts"
            )
        for digest, positions in misses.items():
            unit = _normalize(raw[index_of[digest]], provider.dimension)
            if cache is not None:
                cache.put(provider.id, digest, unit)
            for i in positions:
                results[i] = unit
    out = [r for r in results if r is not None]
    assert len(out) == len(texts)
    return out


def fallback_embed(text: str, dimension: int = 256) -> np.ndarray:
    """One-shot trigram embedding; see :class:`TrigramEmbedder`."""
    return embed_texts(TrigramEmbedder(dimension), [text])[0]


def cosine_similarity(u: np.ndarray, v: np.ndarray) -> float:
    """Dot product of two unit vectors, clamped to [-1, 1].

    Bit-identical inputs return exactly 1.0, so identical fact lists survive
    a threshold of 1.0.
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise DimensionMismatch(f"vector shapes differ: {u.shape} vs {v.shape}")
    if np.array_equal(u, v):
        return 1.0
    return float(np.clip(np.dot(u, v), -1.0, 1.0))


def write_cache_snapshot(cache: EmbeddingCache, path: str) -> None:
    """Rewrite the full cache to ``path`` atomically (compaction helper)."""
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path) or ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            for (provider_id, digest), vec in sorted(cache._entries.items()):
                record = {"provider": provider_id, "text_sha256": digest, "vector": vec.tolist()}
                handle.write(json.dumps(record, ensure_ascii=False) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
