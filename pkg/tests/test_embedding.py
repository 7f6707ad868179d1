import json
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from factalign.embedding import (
    EmbeddingCache,
    TrigramEmbedder,
    cosine_similarity,
    embed_texts,
    fallback_embed,
    text_sha256,
)
from factalign.errors import DimensionMismatch, EmptyText


class TestTrigramEmbedder:
    def test_unit_norm(self):
        vec = embed_texts(TrigramEmbedder(64), ["annotators split facts"])[0]
        assert vec.shape == (64,)
        assert abs(float(np.linalg.norm(vec)) - 1.0) < 1e-6

    def test_deterministic_same_process(self):
        emb = TrigramEmbedder(128)
        a = embed_texts(emb, ["Anna meets Bob"])[0]
        b = embed_texts(emb, ["Anna meets Bob"])[0]
        assert np.array_equal(a, b)

    def test_deterministic_across_processes(self):
        code = (
            "import hashlib\n"
            "from factalign.embedding import fallback_embed\n"
            "v = fallback_embed('stable output please', 32)\n"
            "print(hashlib.sha256(v.tobytes()).hexdigest())\n"
        )
        runs = set()
        for seed in ("0", "12345"):
            out = subprocess.run(
                [sys.executable, "-c", code],
                capture_output=True,
                text=True,
                env={"PYTHONHASHSEED": seed, "PATH": "/usr/bin:/bin"},
                check=True,
            )
            runs.add(out.stdout.strip())
        local = fallback_embed("stable output please", 32)
        import hashlib

        runs.add(hashlib.sha256(local.tobytes()).hexdigest())
        assert len(runs) == 1

    def test_similar_texts_closer_than_disjoint(self):
        a, b, c = embed_texts(
            TrigramEmbedder(256),
            ["the cat sat on the mat", "the cat sat on a mat", "quartz vibrations"],
        )
        assert cosine_similarity(a, b) > cosine_similarity(a, c)

    def test_min_dimension_enforced(self):
        with pytest.raises(ValueError):
            TrigramEmbedder(8)

    def test_id_includes_dimension(self):
        assert TrigramEmbedder(64).id != TrigramEmbedder(128).id

    def test_single_char_text_embeds(self):
        vec = embed_texts(TrigramEmbedder(32), ["a"])[0]
        assert abs(float(np.linalg.norm(vec)) - 1.0) < 1e-6

    @given(st.text(min_size=1, max_size=40).filter(lambda t: t.strip()))
    @settings(max_examples=50)
    def test_any_nonempty_text_has_unit_norm(self, text):
        vec = embed_texts(TrigramEmbedder(32), [text])[0]
        assert abs(float(np.linalg.norm(vec)) - 1.0) < 1e-6


class TestCosine:
    def test_identical_vectors_exactly_one(self):
        vec = fallback_embed("the same text twice", 64)
        assert cosine_similarity(vec, vec.copy()) == 1.0

    def test_disjoint_support_exactly_zero(self):
        u = np.zeros(4)
        v = np.zeros(4)
        u[0] = 1.0
        v[3] = 1.0
        assert cosine_similarity(u, v) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            cosine_similarity(np.ones(3), np.ones(4))

    def test_clipped_to_range(self):
        u = np.array([1.0, 0.0])
        v = np.array([-1.0, 0.0])
        assert cosine_similarity(u, v) == -1.0


class TestCache:
    def test_round_trip_bit_identical(self, tmp_path):
        path = tmp_path / "cache.jsonl"
        cache = EmbeddingCache(path)
        emb = TrigramEmbedder(32)
        vec = embed_texts(emb, ["cached forever"])[0]
        cache.put(emb.id, text_sha256("cached forever"), vec)

        reopened = EmbeddingCache(path)
        hit = reopened.get(emb.id, text_sha256("cached forever"))
        assert hit is not None
        assert np.array_equal(hit, vec)
        assert hit.dtype == vec.dtype

    def test_miss_returns_none(self, tmp_path):
        cache = EmbeddingCache(tmp_path / "c.jsonl")
        assert cache.get("prov", text_sha256("nope")) is None

    def test_jsonl_lines_are_valid_json(self, tmp_path):
        path = tmp_path / "c.jsonl"
        cache = EmbeddingCache(path)
        cache.put("prov", text_sha256("x"), np.array([0.6, 0.8]))
        cache.put("prov", text_sha256("y"), np.array([1.0, 0.0]))
        lines = path.read_text().splitlines()
        assert len(lines) == 2
        for line in lines:
            record = json.loads(line)
            assert set(record) == {"provider", "text_sha256", "vector"}

    def test_keyed_by_provider(self, tmp_path):
        cache = EmbeddingCache(tmp_path / "c.jsonl")
        cache.put("prov-a", text_sha256("x"), np.array([1.0, 0.0]))
        assert cache.get("prov-b", text_sha256("x")) is None

    def test_in_memory_mode(self):
        cache = EmbeddingCache(None)
        cache.put("p", text_sha256("x"), np.array([1.0]))
        assert cache.get("p", text_sha256("x")) is not None


class TestEmbedTexts:
    def test_uses_cache_on_second_call(self, tmp_path):
        class CountingProvider:
            id = "counting-v1"
            dimension = 32

            def __init__(self):
                self.calls = 0
                self.inner = TrigramEmbedder(32)

            def embed_raw(self, texts):
                self.calls += 1
                return self.inner.embed_raw(texts)

        provider = CountingProvider()
        cache = EmbeddingCache(tmp_path / "c.jsonl")
        first = embed_texts(provider, ["alpha", "beta"], cache=cache)
        second = embed_texts(provider, ["alpha", "beta"], cache=cache)
        assert provider.calls == 1
        assert all(np.array_equal(a, b) for a, b in zip(first, second))

    def test_batches_only_misses(self, tmp_path):
        seen = []

        class RecordingProvider:
            id = "recording-v1"
            dimension = 32

            def embed_raw(self, texts):
                seen.append(list(texts))
                return TrigramEmbedder(32).embed_raw(texts)

        cache = EmbeddingCache(tmp_path / "c.jsonl")
        embed_texts(RecordingProvider(), ["one", "two"], cache=cache)
        embed_texts(RecordingProvider(), ["two", "three"], cache=cache)
        assert seen == [["one", "two"], ["three"]]

    def test_duplicate_texts_single_provider_row(self):
        seen = []

        class RecordingProvider:
            id = "recording-v1"
            dimension = 32

            def embed_raw(self, texts):
                seen.append(list(texts))
                return TrigramEmbedder(32).embed_raw(texts)

        vecs = embed_texts(RecordingProvider(), ["dup", "dup", "dup"])
        assert seen == [["dup"]]
        assert len(vecs) == 3
        assert np.array_equal(vecs[0], vecs[2])

    def test_empty_text_rejected(self):
        with pytest.raises(EmptyText):
            embed_texts(TrigramEmbedder(32), ["ok", "   "])

    def test_empty_list(self):
        assert embed_texts(TrigramEmbedder(32), []) == []

    def test_vectors_are_read_only(self):
        vec = embed_texts(TrigramEmbedder(32), ["frozen"])[0]
        with pytest.raises(ValueError):
            vec[0] = 9.0


class TestFallback:
    def test_matches_trigram_provider(self):
        direct = embed_texts(TrigramEmbedder(256), ["same text"])[0]
        assert np.array_equal(fallback_embed("same text", 256), direct)

    def test_default_dimension(self):
        assert fallback_embed("x").shape == (256,)
