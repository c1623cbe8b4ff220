"""Rule and lexicon based entity recognition for Italian legal text.

Pattern entities (EMAIL, DATA, ID) are matched with regular expressions;
name entities (PERSONA, ORGANIZAZZIONE, LOCALITÀ) against small
gazetteers plus shape heuristics. Offsets are Unicode code-point
positions into the plain text, matching the span JSONL contract.

This is the offline backend: deterministic and dependency-free. It is not
a substitute for a trained NER model on real documents, but it emits the
exact same file format, so swapping in a model changes nothing downstream.
"""

import re
from dataclasses import dataclass

MONTHS = ("gennaio|febbraio|marzo|aprile|maggio|giugno|luglio|agosto|"
          "settembre|ottobre|novembre|dicembre")

EMAIL_RE = re.compile(r"\b[\w.+-]+@[\w-]+(?:\.[\w-]+)+\b")
DATE_RE = re.compile(
    r"\b(?:\d{1,2}[/.-]\d{1,2}[/.-]\d{2,4}"
    rf"|\d{{1,2}}°?\s+(?:{MONTHS})\s+\d{{4}})\b", re.IGNORECASE)
ID_RE = re.compile(
    r"\b(?:R\.?G\.?\s*(?:n\.?\s*)?\d+/\d{2,4}"
    r"|C\.?F\.?\s*[A-Z]{6}\d{2}[A-Z]\d{2}[A-Z]\d{3}[A-Z]"
    r"|[A-Z]{6}\d{2}[A-Z]\d{2}[A-Z]\d{3}[A-Z]"
    r"|P\.?\s?IVA\s*\d{11})")

ORG_HEADS = ("tribunale", "corte", "procura", "agenzia", "banca",
             "comune", "ministero", "inps", "inail", "società", "studio")
CITIES = frozenset("""roma milano napoli torino palermo genova bologna
firenze bari catania venezia verona messina padova trieste brescia parma
prato modena cagliari""".split())
FIRST_NAMES = frozenset("""mario luigi giuseppe giovanni antonio francesco
anna maria giulia laura paolo marco andrea stefano chiara elena franco
roberto alessandro federica sara luca matteo simone davide""".split())

_CAP_RUN = re.compile(r"\b[A-ZÀ-Þ][\wà-ÿ'’]+(?:\s+(?:di|del|della|dei|"
                      r"delle|degli)?\s*[A-ZÀ-Þ][\wà-ÿ'’]+)*")

PATTERN_SCORE = 0.95
LEXICON_SCORE = 0.85


@dataclass(frozen=True)
class Span:
    start: int
    end: int
    label: str
    score: float

    def surface(self, text: str) -> str:
        return text[self.start:self.end]


def _pattern_spans(text: str):
    for regex, label in ((EMAIL_RE, "EMAIL"), (DATE_RE, "DATA"),
                         (ID_RE, "ID")):
        for m in regex.finditer(text):
            yield Span(m.start(), m.end(), label, PATTERN_SCORE)


def _name_spans(text: str):
    for m in _CAP_RUN.finditer(text):
        words = m.group().split()
        head = words[0].lower()
        if head in ORG_HEADS:
            yield Span(m.start(), m.end(), "ORGANIZAZZIONE", LEXICON_SCORE)
        elif head in FIRST_NAMES and len(words) >= 2:
            yield Span(m.start(), m.end(), "PERSONA", LEXICON_SCORE)
        elif len(words) == 1 and head in CITIES:
            yield Span(m.start(), m.end(), "LOCALITÀ", LEXICON_SCORE)


def find_entities(text: str) -> list[Span]:
    """All entity spans, sorted by start; pattern matches win overlaps."""
    spans = list(_pattern_spans(text))
    taken = [(s.start, s.end) for s in spans]
    for span in _name_spans(text):
        if all(span.end <= a or span.start >= b for a, b in taken):
            spans.append(span)
    return sorted(spans, key=lambda s: (s.start, s.end))
