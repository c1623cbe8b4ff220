import json

import numpy as np
import pytest

from legaltopics.corpus import Segment, write_segments
from legaltopics.embed_store import EmbeddingMatrix, write_embeddings

THEMES = {
    "locazione": ["locazione", "canone", "immobile", "sfratto", "affitto",
                  "conduttore", "locatore", "morosità", "recesso", "contratto"],
    "furto": ["furto", "rapina", "refurtiva", "aggravante", "arma",
              "sottrazione", "violenza", "pena", "reclusione", "bottino"],
    "licenziamento": ["licenziamento", "lavoratore", "datore", "preavviso",
                      "reintegrazione", "giusta", "causa", "indennità",
                      "dipendente", "recesso"],
    "tributario": ["imposta", "iva", "accertamento", "cartella", "tributo",
                   "agenzia", "entrate", "evasione", "aliquota", "rimborso"],
}

FILLER = ["ricorso", "motivo", "parte", "atto", "norma", "legge", "caso",
          "fatto", "decisione", "esame"]


def make_synthetic_corpus(n_per_theme=50, dims=32, seed=7):
    """~200 segments over 4 planted themes with separable embeddings.

    Theme centers are orthogonal-ish random directions scaled well above the
    noise level, so clustering should recover the planted labels.
    """
    rng = np.random.default_rng(seed)
    theme_names = list(THEMES)
    centers = rng.normal(size=(len(theme_names), dims))
    centers /= np.linalg.norm(centers, axis=1, keepdims=True)
    centers *= 10.0

    segments, vectors, planted = [], [], []
    idx = 0
    for t, name in enumerate(theme_names):
        pool = THEMES[name]
        for _ in range(n_per_theme):
            words = [pool[int(rng.integers(len(pool)))] for _ in range(12)]
            words += [FILLER[int(rng.integers(len(FILLER)))] for _ in range(4)]
            rng.shuffle(words)
            text = " ".join(words)
            segments.append(Segment(
                segment_id=f"doc{t}/p{1 + idx % 9:03d}/e{idx:03d}",
                doc_id=f"doc{t}", page_no=1 + idx % 9, text=text,
                word_count=len(words)))
            vectors.append(centers[t] + rng.normal(scale=1.0, size=dims))
            planted.append(t)
            idx += 1
    matrix = EmbeddingMatrix(
        data=np.asarray(vectors, dtype=np.float32),
        ids=[s.segment_id for s in segments])
    return segments, matrix, np.array(planted)


@pytest.fixture(scope="session")
def synthetic_corpus():
    return make_synthetic_corpus()


@pytest.fixture()
def corpus_files(tmp_path, synthetic_corpus):
    """Segments JSONL + EMB1 embeddings on disk."""
    segments, matrix, planted = synthetic_corpus
    corpus_path = tmp_path / "segments.jsonl"
    emb_path = tmp_path / "segments.emb"
    write_segments(segments, corpus_path)
    write_embeddings(matrix, emb_path)
    return {"corpus": corpus_path, "embeddings": emb_path,
            "planted": planted, "segments": segments, "matrix": matrix}


def make_page(elements, page="doc1_page_1"):
    return json.dumps({"page": page, "elements": elements})


def element(bbox, cls="Text", text="testo di prova", anon=None):
    return {"bbox": bbox, "class": cls, "text": text,
            "anonymized_text": anon if anon is not None else text}
