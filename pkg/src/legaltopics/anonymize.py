"""Span-based masking of sensitive entities with placeholder tags.

Entity spans come from an external NER adapter as JSON Lines with keys
{"segment_id", "start", "end", "label", "score"}; offsets are character
(Unicode scalar value) positions into the segment's plain text.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

# Tag strings reproduced verbatim from the source tag set, including the
# spelling "ORGANIZAZZIONE". Aliases allow the corrected spelling on input.
ENTITY_LABELS = ("ORGANIZAZZIONE", "PERSONA", "LOCALITÀ", "EMAIL", "DATA", "ID")
LABEL_ALIASES = {"ORGANIZZAZIONE": "ORGANIZAZZIONE", "LOCALITA": "LOCALITÀ"}

DEFAULT_SCORE_THRESHOLD = 0.5


class SpanError(ValueError):
    pass


def tag_for(label: str) -> str:
    return "<" + label + ">"


@dataclass(frozen=True)
class EntitySpan:
    segment_id: str
    start: int
    end: int
    label: str
    score: float

    def __post_init__(self):
        label = LABEL_ALIASES.get(self.label, self.label)
        if label not in ENTITY_LABELS:
            raise SpanError(f"unknown entity label {self.label!r}")
        object.__setattr__(self, "label", label)
        if not 0 <= self.start < self.end:
            raise SpanError(f"bad span offsets [{self.start}, {self.end})")
        if not 0.0 <= self.score <= 1.0:
            raise SpanError(f"score {self.score} outside [0, 1]")

    @property
    def length(self) -> int:
        return self.end - self.start


def resolve_overlaps(spans, threshold: float = DEFAULT_SCORE_THRESHOLD,
                     text_length: int | None = None) -> list[EntitySpan]:
    """Threshold and de-overlap spans of one segment.

    Keeps spans with score >= threshold; among overlapping survivors the
    winner is the highest score, ties going to the longer span, then the
    earlier start. Output is sorted by start and pairwise disjoint.
    """
    spans = list(spans)
    if len({s.segment_id for s in spans}) > 1:
        raise SpanError("resolve_overlaps expects spans of a single segment")
    if text_length is not None:
        for s in spans:
            if s.end > text_length:
                raise SpanError(
                    f"span [{s.start}, {s.end}) exceeds text length {text_length}")
    survivors = [s for s in spans if s.score >= threshold]
    # priority order: best span first
    survivors.sort(key=lambda s: (-s.score, -s.length, s.start))
    chosen: list[EntitySpan] = []
    for cand in survivors:
        if all(cand.end <= c.start or cand.start >= c.end for c in chosen):
            chosen.append(cand)
    chosen.sort(key=lambda s: s.start)
    return chosen


def mask(text: str, spans) -> str:
    """Replace each span with its tag; non-span text is preserved verbatim.

    Spans must be sorted and disjoint (use resolve_overlaps first).
    Replacement runs right to left so earlier offsets stay valid.
    """
    spans = list(spans)
    for a, b in zip(spans, spans[1:]):
        if b.start < a.end:
            raise SpanError(
                f"overlapping spans [{a.start},{a.end}) and [{b.start},{b.end})")
    for s in spans:
        if s.end > len(text):
            raise SpanError(
                f"span [{s.start},{s.end}) exceeds text length {len(text)}")
    out = text
    for s in reversed(spans):
        out = out[:s.start] + tag_for(s.label) + out[s.end:]
    return out


def read_spans(path) -> dict[str, list[EntitySpan]]:
    """Load a span JSONL file, grouped by segment_id."""
    by_segment: dict[str, list[EntitySpan]] = {}
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                span = EntitySpan(segment_id=obj["segment_id"],
                                  start=int(obj["start"]), end=int(obj["end"]),
                                  label=obj["label"], score=float(obj["score"]))
            except (json.JSONDecodeError, KeyError, SpanError) as exc:
                raise SpanError(f"{path}:{line_no}: {exc}") from None
            by_segment.setdefault(span.segment_id, []).append(span)
    return by_segment


def mask_segment_texts(segments, spans_by_segment,
                       threshold: float = DEFAULT_SCORE_THRESHOLD):
    """Yield (segment, masked_text) for every segment."""
    for seg in segments:
        spans = resolve_overlaps(spans_by_segment.get(seg.segment_id, []),
                                 threshold, text_length=len(seg.text))
        yield seg, mask(seg.text, spans)
