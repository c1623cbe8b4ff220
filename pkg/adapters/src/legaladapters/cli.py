"""Adapter command line: segment embeddings, entity spans, token embeddings.

Outputs follow the toolkit's external file contracts exactly (EMB1 plus
``.ids`` sidecar, span JSONL), so they feed straight into the pipeline.
"""

import json
import sys
from pathlib import Path

import click
import numpy as np

from . import emb1, encoder, ner


def _read_segments(path):
    segments = []
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                segments.append((rec["segment_id"], rec["text"]))
            except (ValueError, KeyError) as exc:
                raise click.ClickException(
                    f"{path}:{line_no}: bad segment record ({exc})")
    if not segments:
        raise click.ClickException(f"{path}: no segments")
    return segments


@click.group()
def main():
    """Adapters that emit legaltopics file formats."""


@main.command("segment-embeddings")
@click.option("--segments", "segments_file", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_file", required=True, type=click.Path())
@click.option("--model", "model_id", default=encoder.OFFLINE_MODEL_ID,
              show_default=True)
@click.option("--dims", default=256, show_default=True, type=int,
              help="Vector size for the offline hashing encoder.")
@click.option("--max-seq-length", default=512, show_default=True, type=int)
@click.option("--batch-size", default=32, show_default=True, type=int)
def cmd_segment_embeddings(segments_file, out_file, model_id, dims,
                           max_seq_length, batch_size):
    """One embedding row per segment, row order = input order."""
    segments = _read_segments(segments_file)
    try:
        model = encoder.load_transformer(model_id)
    except encoder.EncoderError as exc:
        raise click.ClickException(str(exc))
    if model is not None:
        texts = [text for _, text in segments]
        matrix = np.asarray(model.encode(texts, batch_size=batch_size,
                                         convert_to_numpy=True),
                            dtype=np.float32)
    else:
        rows = []
        for sid, text in segments:
            vec, truncated = encoder.encode_text(text, dims=dims,
                                                 max_seq_length=max_seq_length)
            if truncated:
                click.echo(f"warning: {sid} truncated to "
                           f"{max_seq_length} tokens", err=True)
            rows.append(vec)
        matrix = np.vstack(rows)
    emb1.write_emb1(matrix, [sid for sid, _ in segments], out_file)
    click.echo(f"wrote {matrix.shape[0]}x{matrix.shape[1]} embeddings "
               f"to {out_file}")


@main.command("entity-spans")
@click.option("--segments", "segments_file", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_file", required=True, type=click.Path())
@click.option("--threshold", default=0.5, show_default=True, type=float)
def cmd_entity_spans(segments_file, out_file, threshold):
    """Entity spans as JSONL; offsets are code points into the text."""
    segments = _read_segments(segments_file)
    n = 0
    with open(out_file, "w", encoding="utf-8") as f:
        for sid, text in segments:
            for span in ner.find_entities(text):
                if span.score < threshold:
                    continue
                f.write(json.dumps(
                    {"segment_id": sid, "start": span.start,
                     "end": span.end, "label": span.label,
                     "score": span.score}, ensure_ascii=False) + "\n")
                n += 1
    click.echo(f"wrote {n} spans to {out_file}")


@main.command("token-embeddings")
@click.option("--texts", "texts_file", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="UTF-8 text file, one text per line.")
@click.option("--out-dir", required=True, type=click.Path())
@click.option("--dims", default=256, show_default=True, type=int)
def cmd_token_embeddings(texts_file, out_dir, dims):
    """One EMB1 matrix per text, one row per token (for bertscore)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lines = [l for l in Path(texts_file).read_text(encoding="utf-8")
             .splitlines() if l.strip()]
    if not lines:
        raise click.ClickException(f"{texts_file}: no texts")
    for i, text in enumerate(lines):
        tokens = encoder.tokenize(text)
        if not tokens:
            click.echo(f"warning: line {i + 1} has no tokens, skipped",
                       err=True)
            continue
        matrix = encoder.encode_tokens(tokens, dims=dims)
        ids = [f"{j}:{tok}" for j, tok in enumerate(tokens)]
        emb1.write_emb1(matrix, ids, out / f"text_{i:03d}.emb")
    click.echo(f"wrote token matrices to {out_dir}")


if __name__ == "__main__":
    sys.exit(main())
