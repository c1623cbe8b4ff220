import numpy as np
import pytest

from legaltopics.embed_store import EmbeddingMatrix, write_embeddings
from legaltopics.gen_eval import (GenEvalError, batch_report, bertscore,
                                  similarity_matrix)


def matrix(data, prefix="t"):
    data = np.asarray(data, dtype=np.float32)
    return EmbeddingMatrix(data=data,
                           ids=[f"{prefix}{i}" for i in range(len(data))])


class TestSimilarityMatrix:
    def test_unit_axes(self):
        s = similarity_matrix(matrix([[1, 0], [0, 1]]),
                              matrix([[1, 0]], prefix="r"))
        assert np.allclose(s, [[1.0], [0.0]])

    def test_scale_invariance(self):
        a = matrix([[2.0, 0.0]])
        b = matrix([[0.5, 0.0]], prefix="r")
        assert similarity_matrix(a, b)[0, 0] == pytest.approx(1.0)

    def test_dimension_mismatch(self):
        with pytest.raises(GenEvalError, match="dimension"):
            similarity_matrix(matrix([[1, 0]]), matrix([[1, 0, 0]], prefix="r"))

    def test_zero_norm_row_named(self):
        with pytest.raises(GenEvalError, match="candidate row 1"):
            similarity_matrix(matrix([[1, 0], [0, 0]]),
                              matrix([[1, 0]], prefix="r"))


class TestBertscore:
    def test_identity(self):
        rng = np.random.default_rng(0)
        m = matrix(rng.normal(size=(4, 8)))
        s = bertscore(m, m)
        assert s.precision == pytest.approx(1.0, abs=1e-6)
        assert s.recall == pytest.approx(1.0, abs=1e-6)
        assert s.f1 == pytest.approx(1.0, abs=1e-6)

    def test_duality(self):
        rng = np.random.default_rng(1)
        a = matrix(rng.normal(size=(3, 6)))
        b = matrix(rng.normal(size=(5, 6)), prefix="r")
        fwd, bwd = bertscore(a, b), bertscore(b, a)
        assert fwd.precision == pytest.approx(bwd.recall)
        assert fwd.recall == pytest.approx(bwd.precision)
        assert fwd.f1 == pytest.approx(bwd.f1)

    def test_worked_example(self):
        # candidate tokens: x axis, 45 degrees; reference: x axis, y axis
        cand = matrix([[1.0, 0.0], [1.0, 1.0]])
        ref = matrix([[1.0, 0.0], [0.0, 1.0]], prefix="r")
        s = bertscore(cand, ref)
        half_sqrt2 = 2 ** 0.5 / 2
        p = (1.0 + half_sqrt2) / 2
        r = (1.0 + half_sqrt2) / 2
        assert s.precision == pytest.approx(p, abs=1e-9)
        assert s.recall == pytest.approx(r, abs=1e-9)
        assert s.f1 == pytest.approx(2 * p * r / (p + r), abs=1e-9)

    def test_greedy_oracle(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            a = matrix(rng.normal(size=(rng.integers(1, 6), 4)))
            b = matrix(rng.normal(size=(rng.integers(1, 6), 4)), prefix="r")
            s = bertscore(a, b)

            def cos(u, v):
                return float(np.dot(u, v) /
                             (np.linalg.norm(u) * np.linalg.norm(v)))

            sim = [[cos(u, v) for v in b.data.astype(float)]
                   for u in a.data.astype(float)]
            p = np.mean([max(row) for row in sim])
            r = np.mean([max(col) for col in zip(*sim)])
            assert s.precision == pytest.approx(p, abs=1e-6)
            assert s.recall == pytest.approx(r, abs=1e-6)

    def test_f1_zero_when_orthogonal_sum_zero(self):
        s = bertscore(matrix([[1.0, 0.0]]), matrix([[0.0, 1.0]], prefix="r"))
        assert s.f1 == 0.0


class TestBatchReport:
    def _write(self, tmp_path, name, data):
        path = tmp_path / name
        write_embeddings(matrix(data, prefix=name), path)
        return path

    def test_per_system_means(self, tmp_path):
        rng = np.random.default_rng(3)
        c1 = self._write(tmp_path, "c1.emb", rng.normal(size=(3, 4)))
        c2 = self._write(tmp_path, "c2.emb", rng.normal(size=(2, 4)))
        r1 = self._write(tmp_path, "r1.emb", rng.normal(size=(3, 4)))
        r2 = self._write(tmp_path, "r2.emb", rng.normal(size=(4, 4)))
        manifest = tmp_path / "m.csv"
        manifest.write_text(
            "system,topic_id,candidate_emb_path,reference_emb_path\n"
            f"sysA,0,{c1},{r1}\nsysA,1,{c2},{r2}\n")
        report = batch_report(manifest)
        pair0 = report.metrics["pair/sysA/0/f1"]
        pair1 = report.metrics["pair/sysA/1/f1"]
        assert report.metrics["sysA/f1"] == pytest.approx((pair0 + pair1) / 2)
        assert -1 <= report.metrics["sysA/precision"] <= 1
        assert -1 <= report.metrics["sysA/recall"] <= 1

    def test_missing_file_named(self, tmp_path):
        manifest = tmp_path / "m.csv"
        manifest.write_text(
            "system,topic_id,candidate_emb_path,reference_emb_path\n"
            f"sysA,0,{tmp_path / 'absent.emb'},{tmp_path / 'absent.emb'}\n")
        with pytest.raises(GenEvalError, match="absent.emb"):
            batch_report(manifest)

    def test_bad_header(self, tmp_path):
        manifest = tmp_path / "m.csv"
        manifest.write_text("a,b\n1,2\n")
        with pytest.raises(GenEvalError, match="columns"):
            batch_report(manifest)

    def test_empty_manifest(self, tmp_path):
        manifest = tmp_path / "m.csv"
        manifest.write_text(
            "system,topic_id,candidate_emb_path,reference_emb_path\n")
        with pytest.raises(GenEvalError, match="empty"):
            batch_report(manifest)
