"""Topic quality metrics: topic diversity, NPMI-based C_v coherence, and
the K-sweep report (topic count vs TD / C_v)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import topic_rep


class TopicEvalError(ValueError):
    pass


def topic_diversity(topics) -> float:
    """Unique words across all top-N lists divided by K*N."""
    topics = [list(t) for t in topics]
    if not topics:
        raise TopicEvalError("no topics")
    n = len(topics[0])
    if any(len(t) != n for t in topics):
        raise TopicEvalError("ragged topic word lists")
    union = set()
    for t in topics:
        union.update(t)
    return len(union) / (len(topics) * n)


@dataclass
class CooccurrenceStats:
    total_windows: int
    term_counts: dict[str, int]
    pair_counts: dict[tuple[str, str], int]
    window: int = 110
    epsilon: float = 1e-12

    def p(self, x: str) -> float:
        return self.term_counts.get(x, 0) / self.total_windows

    def p_pair(self, x: str, y: str) -> float:
        if x == y:
            return self.p(x)
        key = (x, y) if x < y else (y, x)
        return self.pair_counts.get(key, 0) / self.total_windows


def cooccurrence(token_lists, vocabulary_terms, window: int = 110,
                 epsilon: float = 1e-12) -> CooccurrenceStats:
    """Boolean sliding-window co-occurrence counts over a tokenized corpus.

    Window width ``window``, stride 1, windows never cross segments;
    segments shorter than the window form a single window.
    """
    token_lists = [list(t) for t in token_lists]
    if not token_lists:
        raise TopicEvalError("empty reference corpus")
    vocab = set(vocabulary_terms)
    total = 0
    term_counts: dict[str, int] = {}
    pair_counts: dict[tuple[str, str], int] = {}
    for tokens in token_lists:
        n_windows = max(1, len(tokens) - window + 1)
        for start in range(n_windows):
            total += 1
            present = sorted({t for t in tokens[start:start + window]
                              if t in vocab})
            for i, x in enumerate(present):
                term_counts[x] = term_counts.get(x, 0) + 1
                for y in present[i + 1:]:
                    pair_counts[(x, y)] = pair_counts.get((x, y), 0) + 1
    return CooccurrenceStats(total_windows=total, term_counts=term_counts,
                             pair_counts=pair_counts, window=window,
                             epsilon=epsilon)


def npmi(stats: CooccurrenceStats, x: str, y: str) -> float:
    """Normalized pointwise mutual information in [-1, 1].

    Computed as ln((p(x,y) + eps) / (p(x) p(y))) / (-ln(p(x,y) + eps)).
    """
    px, py = stats.p(x), stats.p(y)
    if px == 0.0 or py == 0.0:
        raise TopicEvalError(f"term unknown to the reference stats: "
                             f"{x if px == 0 else y!r}")
    pxy = stats.p_pair(x, y) + stats.epsilon
    denom = -math.log(pxy)
    if denom == 0.0:
        return -1.0
    return max(-1.0, min(1.0, math.log(pxy / (px * py)) / denom))


def _npmi_vectors(words, stats):
    vecs = []
    for wi in words:
        if stats.p(wi) == 0.0:
            vecs.append(np.zeros(len(words)))
            continue
        row = []
        for wj in words:
            row.append(npmi(stats, wi, wj) if stats.p(wj) > 0.0 else 0.0)
        vecs.append(np.array(row))
    return vecs


def coherence_cv(topics, stats: CooccurrenceStats, topn: int = 10):
    """C_v: mean over topics of the mean cosine between each top word's
    NPMI vector and the topic's summed NPMI vector.

    Words missing from the stats contribute zero vectors. Returns
    (score, degenerate_flag); the flag marks all-zero-vector topics.
    """
    scores = []
    degenerate = False
    for topic_words in topics:
        words = list(topic_words)[:topn]
        vecs = _npmi_vectors(words, stats)
        total = np.sum(vecs, axis=0)
        tnorm = np.linalg.norm(total)
        sims = []
        for v in vecs:
            vnorm = np.linalg.norm(v)
            if vnorm == 0.0 or tnorm == 0.0:
                degenerate = True
                sims.append(0.0)
            else:
                sims.append(float(np.dot(v, total) / (vnorm * tnorm)))
        scores.append(float(np.mean(sims)))
    if not scores:
        raise TopicEvalError("no topics")
    return float(np.mean(scores)), degenerate


@dataclass
class SweepRow:
    k: int
    topic_diversity: float
    coherence_cv: float
    degenerate: bool = False


@dataclass
class SweepResult:
    rows: list[SweepRow] = field(default_factory=list)

    def to_csv(self) -> str:
        lines = ["K,topic_diversity,coherence_cv"]
        for row in sorted(self.rows, key=lambda r: r.k):
            lines.append(f"{row.k},{row.topic_diversity:.6f},"
                         f"{row.coherence_cv:.6f}")
        return "\n".join(lines) + "\n"


def sweep(segments, labels, embeddings, config: topic_rep.RepresentConfig,
          k_min: int = 2, k_max: int = 50, coherence_topn: int = 10,
          window: int = 110) -> SweepResult:
    """TD and C_v for every K from the base topic count down to k_min.

    The base model is fitted once; each K is produced by similarity-based
    topic merging.
    """
    base = topic_rep.represent(segments, labels, embeddings, config)
    if base.n_topics < k_min:
        raise TopicEvalError(
            f"base model has {base.n_topics} topics, below k_min={k_min}")
    token_lists = [topic_rep.tokenize(s.text, config.stopwords)
                   for s in segments]
    result = SweepResult()

    def add(model):
        word_lists = model.topic_word_lists()
        all_terms = {w for words in word_lists for w in words}
        stats = cooccurrence(token_lists, all_terms, window=window)
        cv, flag = coherence_cv(word_lists, stats, topn=coherence_topn)
        # equalize list lengths so the diversity contract holds even when a
        # small vocabulary leaves some topics short
        n = min(config.top_n_words, *(len(w) for w in word_lists))
        result.rows.append(SweepRow(k=model.n_topics,
                                    topic_diversity=topic_diversity(
                                        [w[:n] for w in word_lists]),
                                    coherence_cv=cv, degenerate=flag))

    start = min(k_max, base.n_topics)
    model = base if start == base.n_topics else topic_rep.reduce_to_k(
        segments, labels, embeddings, config, start)
    add(model)
    for k in range(start - 1, k_min - 1, -1):
        model = topic_rep.reduce_to_k(segments, model.labels, embeddings,
                                      config, k)
        add(model)
    return result
