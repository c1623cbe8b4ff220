"""Topic word extraction: bag-of-words, c-TF-IDF-bm25 weighting, MMR
diversification, and representative documents.

The cluster-level term weight is w = tf * log(1 + (A - f + 0.5) / (f + 0.5))
with tf the term count inside the cluster, f its total count across all
clusters, and A the average word count per cluster.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .embed_store import cosine_similarity

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


class TopicError(ValueError):
    pass


def load_stopwords(path=None) -> frozenset[str]:
    """Stopword list, one term per line; '#' lines are comments."""
    if path is None:
        text = resources.files("legaltopics").joinpath(
            "data/stopwords_it.txt").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return frozenset(words)


def tokenize(text: str, stopwords=frozenset()) -> list[str]:
    """Lowercased runs of letters/digits, length >= 2, stopwords removed.

    Apostrophes split tokens, so "dell'art" yields "dell", "art".
    """
    tokens = []
    for tok in _TOKEN_RE.findall(unicodedata.normalize("NFC", text).lower()):
        if len(tok) < 2 or tok in stopwords:
            continue
        tokens.append(tok)
    return tokens


@dataclass
class Vocabulary:
    index: dict[str, int]
    doc_freq: np.ndarray

    @property
    def terms(self) -> list[str]:
        out = [""] * len(self.index)
        for term, i in self.index.items():
            out[i] = term
        return out


@dataclass
class RepresentConfig:
    ngram_range: tuple[int, int] = (1, 2)
    min_df: int = 2
    top_n_words: int = 15
    diversity: float = 0.35
    n_repr_docs: int = 3
    stopwords: frozenset = frozenset()


def segment_terms(tokens: list[str], ngram_range=(1, 2)) -> list[str]:
    """Unigrams and space-joined n-grams over adjacent post-stopword tokens."""
    lo, hi = ngram_range
    terms = []
    for size in range(lo, hi + 1):
        for i in range(len(tokens) - size + 1):
            terms.append(" ".join(tokens[i:i + size]))
    return terms


def build_vocab(token_lists, labels, ngram_range=(1, 2), min_df: int = 2):
    """Vocabulary plus per-cluster term-count matrix.

    Noise segments (label -1) are excluded throughout. Terms below the
    corpus document-frequency cutoff are pruned.
    """
    labels = np.asarray(labels)
    cluster_ids = sorted({int(l) for l in labels if l >= 0})
    if not cluster_ids:
        raise TopicError("no non-noise clusters")

    df: dict[str, int] = {}
    per_segment_terms = []
    for tokens, label in zip(token_lists, labels):
        terms = segment_terms(tokens, ngram_range) if label >= 0 else []
        per_segment_terms.append(terms)
        for term in set(terms):
            df[term] = df.get(term, 0) + 1

    kept = sorted(t for t, c in df.items() if c >= min_df)
    if not kept:
        raise TopicError("empty vocabulary after document-frequency pruning")
    index = {t: i for i, t in enumerate(kept)}

    row_of = {c: r for r, c in enumerate(cluster_ids)}
    tf = np.zeros((len(cluster_ids), len(kept)), dtype=np.float64)
    for terms, label in zip(per_segment_terms, labels):
        if label < 0:
            continue
        r = row_of[int(label)]
        for term in terms:
            j = index.get(term)
            if j is not None:
                tf[r, j] += 1.0
    vocab = Vocabulary(index=index,
                       doc_freq=np.array([df[t] for t in kept], dtype=np.int64))
    return vocab, tf, cluster_ids


def ctfidf_bm25(tf: np.ndarray) -> np.ndarray:
    """Cluster-level bm25-style term weights from a (clusters x terms) count
    matrix."""
    tf = np.asarray(tf, dtype=np.float64)
    f = tf.sum(axis=0)
    A = tf.sum(axis=1).mean()
    idf = np.log(1.0 + (A - f + 0.5) / (f + 0.5))
    return tf * idf[None, :]


def top_words(weights: np.ndarray, vocab: Vocabulary, top_n: int = 15):
    """Per-cluster ranked candidates, 2*top_n long for diversification.

    Zero-weight terms never enter a candidate list; ties are alphabetical.
    """
    terms = vocab.terms
    out = []
    for row in weights:
        nz = [(terms[j], float(row[j])) for j in np.nonzero(row)[0]]
        nz.sort(key=lambda tw: (-tw[1], tw[0]))
        out.append(nz[:2 * top_n])
    return out


def mmr_diversify(candidates, word_vectors, topic_vector,
                  diversity: float = 0.35, top_n: int = 15):
    """Greedy maximal-marginal-relevance selection.

    candidates are (term, weight) in c-TF-IDF rank order; word_vectors maps
    term -> vector. Score: (1 - diversity) * cos(word, topic)
    - diversity * max over selected of cos(word, selected). Ties fall back
    to c-TF-IDF rank. Returns (selection, truncated_flag).
    """
    lam = 1.0 - diversity
    terms = [t for t, _ in candidates]
    truncated = len(terms) < top_n
    rel = {t: cosine_similarity(word_vectors[t], topic_vector) for t in terms}
    selected: list[str] = []
    remaining = list(terms)
    while remaining and len(selected) < top_n:
        best, best_score = None, None
        for t in remaining:  # rank order; strict improvement keeps ties stable
            if selected:
                redundancy = max(cosine_similarity(word_vectors[t],
                                                   word_vectors[s])
                                 for s in selected)
                score = lam * rel[t] - (1.0 - lam) * redundancy
            else:
                score = rel[t]
            if best is None or score > best_score:
                best, best_score = t, score
        selected.append(best)
        remaining.remove(best)
    return selected, truncated


def representative_docs(segment_ids, embeddings, centroid_vec, n: int = 3):
    """Segment ids closest (cosine) to the centroid; ties by id."""
    sims = [(-cosine_similarity(embeddings[i], centroid_vec), sid)
            for i, sid in enumerate(segment_ids)]
    sims.sort()
    return [sid for _, sid in sims[:n]]


@dataclass
class Topic:
    topic_id: int
    size: int
    words: list[tuple[str, float]]
    representative: list[str]
    centroid: np.ndarray


@dataclass
class TopicModel:
    segment_ids: list[str]
    labels: np.ndarray
    topics: list[Topic] = field(default_factory=list)

    @property
    def n_topics(self) -> int:
        return len(self.topics)

    def topic_word_lists(self):
        return [[t for t, _ in topic.words] for topic in self.topics]

    def to_json(self) -> str:
        return json.dumps(
            {"topics": [{"id": t.topic_id, "size": t.size,
                         "words": [{"term": term, "weight": w}
                                   for term, w in t.words],
                         "representative_docs": list(t.representative)}
                        for t in self.topics]},
            ensure_ascii=False, indent=2)


def represent(segments, labels, embeddings, config: RepresentConfig) -> TopicModel:
    """Build the full topic model from labeled segments.

    ``embeddings`` is an (n_segments, d) array row-aligned with segments.
    Word vectors for MMR are the normalized mean embedding of the cluster's
    segments containing the word; the topic vector is the cluster centroid.
    """
    segments = list(segments)
    labels = np.asarray(labels, dtype=np.int64)
    embeddings = np.asarray(embeddings, dtype=np.float64)
    token_lists = [tokenize(s.text, config.stopwords) for s in segments]
    vocab, tf, cluster_ids = build_vocab(token_lists, labels,
                                         config.ngram_range, config.min_df)
    weights = ctfidf_bm25(tf)
    candidates = top_words(weights, vocab, config.top_n_words)

    topics = []
    for row, cid in enumerate(cluster_ids):
        members = np.nonzero(labels == cid)[0]
        centroid_vec = embeddings[members].mean(axis=0)
        member_terms = [set(segment_terms(token_lists[i], config.ngram_range))
                        for i in members]
        word_vectors = {}
        for term, _ in candidates[row]:
            rows = [embeddings[i] for i, terms in zip(members, member_terms)
                    if term in terms]
            if rows:
                v = np.mean(rows, axis=0)
                norm = np.linalg.norm(v)
                word_vectors[term] = v / norm if norm > 0 else v
        usable = [(t, w) for t, w in candidates[row]
                  if t in word_vectors and np.linalg.norm(word_vectors[t]) > 0]
        selection, _ = mmr_diversify(usable, word_vectors, centroid_vec,
                                     config.diversity, config.top_n_words)
        weight_of = dict(usable)
        words = [(t, weight_of[t]) for t in selection]
        words.sort(key=lambda tw: (-tw[1], tw[0]))
        topics.append(Topic(
            topic_id=cid, size=len(members), words=words,
            representative=representative_docs(
                [segments[i].segment_id for i in members],
                embeddings[members], centroid_vec, config.n_repr_docs),
            centroid=centroid_vec))
    return TopicModel(segment_ids=[s.segment_id for s in segments],
                      labels=labels, topics=topics)


def merge_once(labels: np.ndarray, centroids: dict[int, np.ndarray]):
    """Merge the topic pair with the highest centroid cosine similarity.

    Returns relabeled labels (dense, renumbered by first appearance)."""
    ids = sorted(centroids)
    if len(ids) < 2:
        raise TopicError("nothing to merge")
    best = None
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            sim = cosine_similarity(centroids[a], centroids[b])
            if best is None or sim > best[0]:
                best = (sim, a, b)
    _, a, b = best
    merged = labels.copy()
    merged[merged == b] = a
    remap: dict[int, int] = {}
    out = merged.copy()
    for i, l in enumerate(merged):
        if l >= 0:
            if l not in remap:
                remap[int(l)] = len(remap)
            out[i] = remap[int(l)]
    return out


def reduce_to_k(segments, labels, embeddings, config: RepresentConfig,
                k: int) -> TopicModel:
    """Iteratively merge most-similar topics until exactly k remain.

    Noise assignments are untouched; the model is re-fit after each merge.
    """
    model = represent(segments, labels, embeddings, config)
    if not 2 <= k <= model.n_topics:
        raise TopicError(
            f"k={k} outside [2, {model.n_topics}]")
    while model.n_topics > k:
        centroids = {t.topic_id: t.centroid for t in model.topics}
        labels = merge_once(model.labels, centroids)
        model = represent(segments, labels, embeddings, config)
    return model
