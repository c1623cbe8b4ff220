"""Command-line front door wiring the toolkit into one workflow.

Exit codes: 0 success, 1 validation error, 2 I/O error. All randomness is
controlled by --seed; identical invocations produce identical artifacts.
"""

from __future__ import annotations

import csv
import functools
import json
import os
import sys
from pathlib import Path

import click
import numpy as np

from . import (anonymize as anon, cluster, config as config_mod, corpus,
               eval_detect, eval_text, gen_eval, interpret as interpret_mod,
               plots, reduce as reduce_mod, topic_eval, topic_rep)
from .embed_store import EmbeddingMatrix, read_embeddings, write_embeddings

_VALIDATION_ERRORS = (ValueError, corpus.CorpusError, config_mod.ConfigError,
                      interpret_mod.InterpretError)


def guarded(f):
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except OSError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        except _VALIDATION_ERRORS as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
    return wrapper


@click.group()
def main():
    """Corpus-to-topics toolkit for legal document extraction files."""


@main.command("ingest")
@click.option("--in", "in_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--out", "out_file", required=True, type=click.Path())
@click.option("--drop-classes", default="Title,Section-header,Page-footer",
              show_default=True, help="Comma-separated element classes to drop.")
@click.option("--min-quantile", default=0.25, show_default=True, type=float,
              help="Length-filter quantile over the word-count distribution.")
@click.option("--anonymized", is_flag=True,
              help="Use the anonymized text field instead of the plain text.")
@guarded
def cmd_ingest(in_dir, out_file, drop_classes, min_quantile, anonymized):
    """Parse page JSON files into a filtered segment table (JSONL)."""
    pages = []
    for path in sorted(Path(in_dir).glob("*.json")):
        pages.append(corpus.parse_page(path.read_bytes()))
    if not pages:
        raise corpus.CorpusError(f"no .json page files in {in_dir}")
    drop = frozenset(corpus.ElementClass(c.strip())
                     for c in drop_classes.split(",") if c.strip())
    segments = corpus.filter_corpus(pages, drop_classes=drop,
                                    min_quantile=min_quantile,
                                    use_anonymized=anonymized)
    corpus.write_segments(segments, out_file)
    stats = corpus.corpus_stats(segments)
    click.echo(f"wrote {stats['n_segments']} segments from "
               f"{stats['n_documents']} documents to {out_file}")


@main.command("anonymize")
@click.option("--corpus", "corpus_file", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--spans", "spans_file", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--threshold", default=anon.DEFAULT_SCORE_THRESHOLD,
              show_default=True, type=float,
              help="Minimum entity confidence score.")
@click.option("--out", "out_file", required=True, type=click.Path())
@guarded
def cmd_anonymize(corpus_file, spans_file, threshold, out_file):
    """Mask entity spans in a segment table with placeholder tags."""
    segments = corpus.read_segments(corpus_file)
    spans = anon.read_spans(spans_file)
    masked = []
    for seg, text in anon.mask_segment_texts(segments, spans, threshold):
        masked.append(corpus.Segment(
            segment_id=seg.segment_id, doc_id=seg.doc_id, page_no=seg.page_no,
            text=text, word_count=corpus.word_count(text)))
    corpus.write_segments(masked, out_file)
    click.echo(f"masked {len(masked)} segments -> {out_file}")


def _represent_config(cfg: config_mod.ToolkitConfig) -> topic_rep.RepresentConfig:
    vec = cfg.section("vectorizer")
    top = cfg.section("topics")
    stopwords = topic_rep.load_stopwords(vec["stop_words"] or None)
    return topic_rep.RepresentConfig(
        ngram_range=(vec["ngram_min"], vec["ngram_max"]),
        min_df=vec["min_df"], top_n_words=top["top_n_words"],
        diversity=top["diversity"], n_repr_docs=top["n_repr_docs"],
        stopwords=stopwords)


@main.command("fit")
@click.option("--corpus", "corpus_file", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--embeddings", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--config", "config_file", default=None,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "model_dir", required=True, type=click.Path())
@click.option("--seed", default=42, show_default=True, type=int)
@guarded
def cmd_fit(corpus_file, embeddings, config_file, model_dir, seed):
    """Reduce, cluster, and represent: writes labels.csv, topics.json and
    the reduced embeddings to the model directory."""
    cfg = config_mod.load_config(config_file)
    segments = corpus.read_segments(corpus_file)
    emb = read_embeddings(embeddings)
    if emb.ids != [s.segment_id for s in segments]:
        raise corpus.CorpusError(
            "embedding row ids do not match the corpus segment ids")

    reduced = reduce_mod.fit_transform(emb, cfg.reduce_config(seed=seed))
    result = cluster.fit(reduced.data, cfg.cluster_config())
    model = topic_rep.represent(segments, result.labels, emb.data,
                                _represent_config(cfg))

    out = Path(model_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "labels.csv", "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["segment_id", "topic_id"])
        for sid, label in zip(model.segment_ids, model.labels.tolist()):
            writer.writerow([sid, label])
    (out / "topics.json").write_text(model.to_json() + "\n", encoding="utf-8")
    write_embeddings(reduced, out / "reduced.emb")
    (out / "fit.json").write_text(json.dumps({
        "corpus": os.path.abspath(corpus_file),
        "embeddings": os.path.abspath(embeddings),
        "config": os.path.abspath(config_file) if config_file else None,
        "seed": seed}, indent=2) + "\n", encoding="utf-8")
    click.echo(f"fit: {model.n_topics} topics over {len(segments)} segments "
               f"({int((model.labels < 0).sum())} noise) -> {model_dir}")


def _load_model_inputs(model_dir, corpus_file=None, embeddings=None,
                       config_file=None):
    out = Path(model_dir)
    manifest = json.loads((out / "fit.json").read_text(encoding="utf-8"))
    corpus_file = corpus_file or manifest["corpus"]
    embeddings = embeddings or manifest["embeddings"]
    if config_file is None:
        config_file = manifest.get("config")
    segments = corpus.read_segments(corpus_file)
    emb = read_embeddings(embeddings)
    cfg = config_mod.load_config(config_file)
    labels = np.full(len(segments), -1, dtype=np.int64)
    index = {s.segment_id: i for i, s in enumerate(segments)}
    with open(out / "labels.csv", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            labels[index[row["segment_id"]]] = int(row["topic_id"])
    return segments, labels, emb, cfg, manifest


@main.command("sweep")
@click.option("--model-dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--kmin", default=2, show_default=True, type=int)
@click.option("--kmax", default=50, show_default=True, type=int)
@click.option("--out", "out_file", required=True, type=click.Path())
@guarded
def cmd_sweep(model_dir, kmin, kmax, out_file):
    """Topic-count sweep: TD and C_v for K from the fitted count down to
    kmin, via similarity-based topic merging."""
    segments, labels, emb, cfg, _ = _load_model_inputs(model_dir)
    coh = cfg.section("coherence")
    result = topic_eval.sweep(segments, labels, emb.data,
                              _represent_config(cfg), k_min=kmin, k_max=kmax,
                              coherence_topn=coh["topn"],
                              window=coh["window"])
    Path(out_file).write_text(result.to_csv(), encoding="utf-8")
    click.echo(f"wrote {len(result.rows)} sweep rows to {out_file}")


@main.command("eval-detect")
@click.option("--pred", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--gt", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--mode", type=click.Choice(["50", "50-95"]), default="50",
              show_default=True)
@guarded
def cmd_eval_detect(pred, gt, mode):
    """Detection metrics (per-class AP, mAP) from prediction/GT JSONL."""
    preds = eval_detect.read_boxes(pred, with_score=True)
    gts = eval_detect.read_boxes(gt, with_score=False)
    thresholds = (eval_detect.MAP50_THRESHOLDS if mode == "50"
                  else eval_detect.MAP50_95_THRESHOLDS)
    click.echo(eval_detect.mean_ap(preds, gts, thresholds).to_json())


@main.command("eval-ocr")
@click.option("--pairs", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="TSV file: reference TAB hypothesis per line.")
@click.option("--normalize", is_flag=True,
              help="Casefold and collapse whitespace before comparing.")
@guarded
def cmd_eval_ocr(pairs, normalize):
    """Corpus CER/WER (micro and macro averages)."""
    rates = eval_text.corpus_rates(eval_text.read_pairs_tsv(pairs),
                                   normalize=normalize)
    click.echo(json.dumps(rates, indent=2))


@main.command("bertscore")
@click.option("--manifest", required=True,
              type=click.Path(exists=True, dir_okay=False))
@guarded
def cmd_bertscore(manifest):
    """Token-embedding P/R/F1 report over a pairs manifest CSV."""
    click.echo(gen_eval.batch_report(manifest).to_json())


@main.command("interpret")
@click.option("--model-dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--provider", required=True,
              help="Provider name: the [llm.<name>] config section.")
@click.option("--task", type=click.Choice(["label", "summary"]),
              required=True)
@click.option("--out", "out_file", required=True, type=click.Path())
@guarded
def cmd_interpret(model_dir, provider, task, out_file):
    """Request topic labels or summaries from a chat-completion endpoint."""
    segments, labels, emb, cfg, _ = _load_model_inputs(model_dir)
    if provider not in cfg.llm_providers:
        raise config_mod.ConfigError(
            f"no [llm.{provider}] section in the config")
    block = cfg.llm_providers[provider]
    headers = {}
    if block.get("auth_header"):
        value = os.environ.get(block.get("auth_env", ""), "")
        headers[block["auth_header"]] = value
    provider_cfg = interpret_mod.ProviderConfig(
        name=provider, endpoint=block["endpoint"], model=block["model"],
        headers=headers, timeout=block.get("timeout", 120.0),
        retries=block.get("retries", 3), backoff=block.get("backoff", 1.0),
        send_sampling_params=block.get("send_sampling_params", True))

    model = topic_rep.represent(segments, labels, emb.data,
                                _represent_config(cfg))
    text_of = {s.segment_id: s.text for s in segments}
    repr_texts = {t.topic_id: [text_of[sid] for sid in t.representative]
                  for t in model.topics}
    records = list(interpret_mod.interpret_topics(
        model, provider_cfg, interpret_mod.PromptTask(kind=task), repr_texts))
    interpret_mod.write_results(records, out_file)
    click.echo(f"wrote {len(records)} {task} results to {out_file}")


@main.command("plot")
@click.argument("kind", type=click.Choice(["scatter", "bars", "sweep"]))
@click.option("--model-dir", type=click.Path(exists=True, file_okay=False))
@click.option("--csv", "csv_file", type=click.Path(exists=True,
                                                   dir_okay=False))
@click.option("--out", "out_file", required=True, type=click.Path())
@click.option("--seed", default=42, show_default=True, type=int)
@guarded
def cmd_plot(kind, model_dir, csv_file, out_file, seed):
    """Emit an SVG plot: topic scatter, topic word bars, or the K sweep."""
    if kind == "sweep":
        if not csv_file:
            raise config_mod.ConfigError("plot sweep needs --csv")
        rows = []
        with open(csv_file, encoding="utf-8") as f:
            for rec in csv.DictReader(f):
                rows.append(topic_eval.SweepRow(
                    k=int(rec["K"]),
                    topic_diversity=float(rec["topic_diversity"]),
                    coherence_cv=float(rec["coherence_cv"])))
        svg = plots.sweep_svg(rows)
    elif kind == "bars":
        if not model_dir:
            raise config_mod.ConfigError("plot bars needs --model-dir")
        doc = json.loads((Path(model_dir) / "topics.json")
                         .read_text(encoding="utf-8"))
        topics = [topic_rep.Topic(topic_id=t["id"], size=t["size"],
                                  words=[(w["term"], w["weight"])
                                         for w in t["words"]],
                                  representative=t["representative_docs"],
                                  centroid=np.zeros(1))
                  for t in doc["topics"]]
        svg = plots.bars_svg(topics)
    else:
        if not model_dir:
            raise config_mod.ConfigError("plot scatter needs --model-dir")
        segments, labels, emb, cfg, _ = _load_model_inputs(model_dir)
        rc = cfg.reduce_config(seed=seed)
        rc.n_components = 2
        points = reduce_mod.fit_transform(emb, rc)
        svg = plots.scatter_svg(points.data, labels.tolist())
    Path(out_file).write_text(svg, encoding="utf-8")
    click.echo(f"wrote {out_file}")


if __name__ == "__main__":
    main()
