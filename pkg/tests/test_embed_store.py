import struct

import numpy as np
import pytest

from legaltopics.embed_store import (EmbeddingError, EmbeddingMatrix,
                                     centroid, cosine_similarity,
                                     read_embeddings, write_embeddings)


def matrix(data, ids=None):
    data = np.asarray(data, dtype=np.float32)
    return EmbeddingMatrix(data=data,
                           ids=ids or [f"r{i}" for i in range(len(data))])


class TestRoundTrip:
    def test_bit_exact(self, tmp_path):
        m = matrix(np.random.default_rng(0).normal(size=(3, 4)))
        path = tmp_path / "m.emb"
        write_embeddings(m, path)
        back = read_embeddings(path)
        assert np.array_equal(back.data, m.data)
        assert back.ids == m.ids

    def test_truncated_payload(self, tmp_path):
        path = tmp_path / "t.emb"
        path.write_bytes(b"EMB1" + struct.pack("<II", 2, 3) + b"\0" * 12)
        (tmp_path / "t.emb.ids").write_text("a\nb\n")
        with pytest.raises(EmbeddingError, match="truncated"):
            read_embeddings(path)

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "b.emb"
        path.write_bytes(b"XXXX" + b"\0" * 20)
        with pytest.raises(EmbeddingError, match="magic"):
            read_embeddings(path)

    def test_id_count_mismatch(self, tmp_path):
        m = matrix(np.ones((2, 2)))
        path = tmp_path / "m.emb"
        write_embeddings(m, path)
        (tmp_path / "m.emb.ids").write_text("only_one\n")
        with pytest.raises(EmbeddingError, match="sidecar"):
            read_embeddings(path)

    def test_nan_names_row(self):
        data = np.ones((2, 2), dtype=np.float32)
        data[0, 1] = np.nan
        with pytest.raises(EmbeddingError, match="row 0"):
            matrix(data)

    def test_duplicate_ids(self):
        with pytest.raises(EmbeddingError, match="unique"):
            matrix(np.ones((2, 2)), ids=["a", "a"])


class TestCosine:
    def test_parallel(self):
        assert cosine_similarity([1, 0], [1, 0]) == 1.0

    def test_orthogonal(self):
        assert cosine_similarity([1, 0], [0, 1]) == 0.0

    def test_hand_value(self):
        assert cosine_similarity([1, 1], [1, 0]) == pytest.approx(2 ** 0.5 / 2)

    def test_zero_norm(self):
        with pytest.raises(ValueError):
            cosine_similarity([0, 0], [1, 0])

    def test_self_similarity(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            v = rng.normal(size=5)
            assert cosine_similarity(v, v) == pytest.approx(1.0, abs=1e-6)


class TestCentroid:
    def test_single_row(self):
        m = matrix([[1, 2], [3, 4]])
        assert np.allclose(centroid(m, [1]), [3, 4])

    def test_opposite_vectors(self):
        m = matrix([[1, 0], [-1, 0]])
        assert np.allclose(centroid(m, [0, 1]), [0, 0])

    def test_mean_oracle(self):
        rng = np.random.default_rng(2)
        m = matrix(rng.normal(size=(5, 3)))
        got = centroid(m, [0, 2, 4])
        expected = (m.data[0].astype(np.float64) + m.data[2] + m.data[4]) / 3
        assert np.allclose(got, expected)

    def test_empty_set(self):
        with pytest.raises(ValueError):
            centroid(matrix([[1.0]]), [])
