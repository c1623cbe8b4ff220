"""Page-extraction parsing, reading order, and corpus filtering.

Input unit is one page JSON document::

    {"page": "...", "elements": [{"bbox": [xmin, ymin, xmax, ymax],
                                  "class": "...", "text": "...",
                                  "anonymized_text": "..."}]}

Filtered output is a segment table (JSON Lines, one segment per line).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class CorpusError(ValueError):
    pass


class ElementClass(str, Enum):
    TEXT = "Text"
    TITLE = "Title"
    SECTION_HEADER = "Section-header"
    PAGE_FOOTER = "Page-footer"


DEFAULT_DROP_CLASSES = frozenset(
    {ElementClass.TITLE, ElementClass.SECTION_HEADER, ElementClass.PAGE_FOOTER})


@dataclass(frozen=True)
class BoundingBox:
    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self):
        if min(self.x_min, self.y_min, self.x_max, self.y_max) < 0:
            raise CorpusError(f"negative coordinate in box {self.as_list()}")
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise CorpusError(f"degenerate box {self.as_list()}")

    def as_list(self):
        return [self.x_min, self.y_min, self.x_max, self.y_max]

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    def area(self) -> float:
        return (self.x_max - self.x_min) * (self.y_max - self.y_min)


@dataclass(frozen=True)
class PageElement:
    box: BoundingBox
    element_class: ElementClass
    text: str
    anonymized_text: str


@dataclass
class PageExtraction:
    page_name: str
    elements: list[PageElement] = field(default_factory=list)

    def __post_init__(self):
        if not self.page_name:
            raise CorpusError("page name must be non-empty")


@dataclass(frozen=True)
class Segment:
    segment_id: str
    doc_id: str
    page_no: int
    text: str
    word_count: int

    def to_json(self) -> str:
        return json.dumps(
            {"segment_id": self.segment_id, "doc_id": self.doc_id,
             "page_no": self.page_no, "text": self.text,
             "word_count": self.word_count},
            ensure_ascii=False)


def parse_page(data: bytes | str) -> PageExtraction:
    """Parse and validate one page JSON document."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise CorpusError(f"malformed JSON: {exc}") from exc
    if not isinstance(obj, dict) or "page" not in obj or "elements" not in obj:
        raise CorpusError('page document must have "page" and "elements" keys')
    elements = []
    for i, el in enumerate(obj["elements"]):
        try:
            cls = ElementClass(el["class"])
        except ValueError:
            raise CorpusError(
                f"element {i}: unknown class {el['class']!r}") from None
        except (KeyError, TypeError):
            raise CorpusError(f"element {i}: missing class") from None
        bbox = el.get("bbox")
        if not isinstance(bbox, list) or len(bbox) != 4:
            raise CorpusError(f"element {i}: bbox must be a 4-list")
        try:
            box = BoundingBox(*[float(v) for v in bbox])
        except CorpusError as exc:
            raise CorpusError(f"element {i}: {exc}") from None
        if "text" not in el or "anonymized_text" not in el:
            raise CorpusError(f"element {i}: missing text fields")
        elements.append(PageElement(box, cls, str(el["text"]),
                                    str(el["anonymized_text"])))
    return PageExtraction(page_name=str(obj["page"]), elements=elements)


def serialize_page(page: PageExtraction) -> str:
    return json.dumps(
        {"page": page.page_name,
         "elements": [{"bbox": el.box.as_list(), "class": el.element_class.value,
                       "text": el.text, "anonymized_text": el.anonymized_text}
                      for el in page.elements]},
        ensure_ascii=False)


def _same_row(a: BoundingBox, b: BoundingBox) -> bool:
    overlap = min(a.y_max, b.y_max) - max(a.y_min, b.y_min)
    shorter = min(a.height, b.height)
    return overlap >= 0.5 * shorter


def reading_order(elements):
    """Stable Western reading order over objects carrying a ``box`` attribute.

    Elements are grouped into rows (vertical overlap >= 50% of the shorter
    box against the row seed), rows ordered by y_min, rows read left to
    right by x_min.
    """
    items = list(elements)
    order = sorted(range(len(items)),
                   key=lambda i: (items[i].box.y_min, items[i].box.x_min, i))
    rows: list[list[int]] = []
    for i in order:
        if rows and _same_row(items[rows[-1][0]].box, items[i].box):
            rows[-1].append(i)
        else:
            rows.append([i])
    result = []
    for row in rows:
        row.sort(key=lambda i: (items[i].box.x_min, i))
        result.extend(items[i] for i in row)
    return result


_PAGE_NAME_RE = re.compile(r"^(?P<doc>.*?)[._-]?p(?:age)?[._-]?(?P<no>\d+)$")


def split_page_name(page_name: str) -> tuple[str, int]:
    """Derive (doc_id, page_no) from a page name like "doc_page_3"."""
    m = _PAGE_NAME_RE.match(page_name)
    if m and m.group("doc"):
        return m.group("doc"), int(m.group("no"))
    return page_name, 1


def quantile(values, q: float) -> float:
    """Linearly interpolated empirical quantile (numpy default)."""
    return float(np.quantile(np.asarray(values, dtype=np.float64), q))


def word_count(text: str) -> int:
    return len(text.split())


def filter_corpus(pages, drop_classes=DEFAULT_DROP_CLASSES,
                  min_quantile: float = 0.25,
                  use_anonymized: bool = False) -> list[Segment]:
    """Filter page elements into the analysis segment table.

    Drops elements whose class is in ``drop_classes``, then drops elements
    whose word count falls strictly below the ``min_quantile`` empirical
    quantile of the remaining distribution. Elements are emitted in reading
    order, with ids "doc/pNNN/eMMM".
    """
    if not 0 <= min_quantile < 1:
        raise CorpusError("min_quantile must be in [0, 1)")
    kept = []
    for page in pages:
        doc_id, page_no = split_page_name(page.page_name)
        ordered = reading_order(page.elements)
        for idx, el in enumerate(ordered):
            if el.element_class in drop_classes:
                continue
            text = el.anonymized_text if use_anonymized else el.text
            kept.append((doc_id, page_no, idx, text, word_count(text)))
    if not kept:
        raise CorpusError("all elements filtered out: empty corpus")
    threshold = quantile([k[4] for k in kept], min_quantile)
    segments = [
        Segment(segment_id=f"{doc}/p{page:03d}/e{idx:03d}", doc_id=doc,
                page_no=page, text=text, word_count=wc)
        for doc, page, idx, text, wc in kept if wc >= threshold
    ]
    if not segments:
        raise CorpusError("all elements filtered out by length threshold")
    return segments


def corpus_stats(segments) -> dict:
    """Count, word-count quartiles, and pages-per-document summary."""
    segments = list(segments)
    if not segments:
        raise CorpusError("empty corpus")
    counts = [s.word_count for s in segments]
    pages_per_doc: dict[str, set] = {}
    for s in segments:
        pages_per_doc.setdefault(s.doc_id, set()).add(s.page_no)
    return {
        "n_segments": len(segments),
        "n_documents": len(pages_per_doc),
        "words_mean": float(np.mean(counts)),
        "words_q1": quantile(counts, 0.25),
        "words_median": quantile(counts, 0.5),
        "words_q3": quantile(counts, 0.75),
        "pages_per_document_mean": float(
            np.mean([len(v) for v in pages_per_doc.values()])),
    }


def write_segments(segments, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for seg in segments:
            f.write(seg.to_json() + "\n")


def read_segments(path) -> list[Segment]:
    segments = []
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                segments.append(Segment(
                    segment_id=obj["segment_id"], doc_id=obj["doc_id"],
                    page_no=int(obj["page_no"]), text=obj["text"],
                    word_count=int(obj["word_count"])))
            except (json.JSONDecodeError, KeyError) as exc:
                raise CorpusError(f"{path}:{line_no}: bad segment line: {exc}")
    return segments
