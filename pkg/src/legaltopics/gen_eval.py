"""Greedy token-matching precision/recall/F1 over token-embedding files,
for scoring generated topic labels and summaries against references."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .embed_store import EmbeddingMatrix, read_embeddings
from .eval_detect import MetricReport


class GenEvalError(ValueError):
    pass


@dataclass(frozen=True)
class BertScore:
    precision: float
    recall: float
    f1: float


def similarity_matrix(candidate: EmbeddingMatrix,
                      reference: EmbeddingMatrix) -> np.ndarray:
    if candidate.n_dims != reference.n_dims:
        raise GenEvalError(
            f"dimension mismatch: {candidate.n_dims} vs {reference.n_dims}")
    c = candidate.data.astype(np.float64)
    r = reference.data.astype(np.float64)
    cn = np.linalg.norm(c, axis=1)
    rn = np.linalg.norm(r, axis=1)
    for name, norms in (("candidate", cn), ("reference", rn)):
        if np.any(norms == 0):
            raise GenEvalError(
                f"zero-norm token vector in {name} row {int(np.argmin(norms))}")
    return np.clip((c / cn[:, None]) @ (r / rn[:, None]).T, -1.0, 1.0)


def bertscore(candidate: EmbeddingMatrix,
              reference: EmbeddingMatrix) -> BertScore:
    """P = mean of candidate rows' best matches, R = mean of reference
    columns' best matches, F1 = harmonic mean (0 when P + R = 0)."""
    s = similarity_matrix(candidate, reference)
    p = float(s.max(axis=1).mean())
    r = float(s.max(axis=0).mean())
    f1 = 0.0 if p + r == 0 else 2.0 * p * r / (p + r)
    return BertScore(precision=p, recall=r, f1=f1)


def batch_report(manifest_path) -> MetricReport:
    """Mean P/R/F1 per system over a manifest CSV with columns
    system, topic_id, candidate_emb_path, reference_emb_path."""
    rows = []
    with open(manifest_path, encoding="utf-8") as f:
        reader = csv.DictReader(f)
        required = {"system", "topic_id", "candidate_emb_path",
                    "reference_emb_path"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise GenEvalError(
                f"{manifest_path}: manifest must have columns {sorted(required)}")
        for rec in reader:
            rows.append(rec)
    if not rows:
        raise GenEvalError(f"{manifest_path}: empty manifest")

    per_pair = {}
    by_system: dict[str, list[BertScore]] = {}
    for rec in rows:
        for key in ("candidate_emb_path", "reference_emb_path"):
            try:
                open(rec[key], "rb").close()
            except OSError:
                raise GenEvalError(f"missing embedding file {rec[key]!r} "
                                   f"(system {rec['system']!r}, "
                                   f"topic {rec['topic_id']!r})") from None
        score = bertscore(read_embeddings(rec["candidate_emb_path"]),
                          read_embeddings(rec["reference_emb_path"]))
        per_pair[f"{rec['system']}/{rec['topic_id']}"] = score
        by_system.setdefault(rec["system"], []).append(score)

    metrics = {}
    for system, scores in sorted(by_system.items()):
        metrics[f"{system}/precision"] = float(
            np.mean([s.precision for s in scores]))
        metrics[f"{system}/recall"] = float(np.mean([s.recall for s in scores]))
        metrics[f"{system}/f1"] = float(np.mean([s.f1 for s in scores]))
    for key, s in per_pair.items():
        metrics[f"pair/{key}/precision"] = s.precision
        metrics[f"pair/{key}/recall"] = s.recall
        metrics[f"pair/{key}/f1"] = s.f1
    return MetricReport(metrics=metrics,
                        config={"manifest": str(manifest_path)})
