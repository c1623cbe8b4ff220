"""Character and word error rates via Levenshtein alignment counts."""

from __future__ import annotations

from dataclasses import dataclass

from ._kernels import edit_counts_kernel


class EvalTextError(ValueError):
    pass


@dataclass(frozen=True)
class EditCounts:
    substitutions: int
    deletions: int
    insertions: int
    reference_length: int

    @property
    def errors(self) -> int:
        return self.substitutions + self.deletions + self.insertions

    @property
    def rate(self) -> float:
        return self.errors / self.reference_length


def _codes(tokens):
    table: dict = {}
    return [table.setdefault(t, len(table)) for t in tokens]


def edit_counts(reference, hypothesis) -> EditCounts:
    """Minimal-cost alignment counts between two token sequences."""
    reference = list(reference)
    hypothesis = list(hypothesis)
    if not reference:
        raise EvalTextError("empty reference")
    joint = _codes(reference + hypothesis)
    s, d, i = edit_counts_kernel(joint[:len(reference)], joint[len(reference):])
    return EditCounts(substitutions=s, deletions=d, insertions=i,
                      reference_length=len(reference))


def cer(reference: str, hypothesis: str) -> float:
    """Character error rate over the reference's Unicode scalar values."""
    return edit_counts(reference, hypothesis).rate


def wer(reference: str, hypothesis: str) -> float:
    """Word error rate over whitespace-delimited words."""
    ref_words = reference.split()
    if not ref_words:
        raise EvalTextError("reference contains no words")
    return edit_counts(ref_words, hypothesis.split()).rate


def corpus_rates(pairs, normalize: bool = False) -> dict:
    """Micro- and macro-averaged CER/WER over (reference, hypothesis) pairs.

    With normalize=True, text is casefolded and whitespace-collapsed before
    comparison (off by default: rates refer to raw recognizer output).
    """
    per_line = []
    char_err = char_n = word_err = word_n = 0
    for ref, hyp in pairs:
        if normalize:
            ref = " ".join(ref.casefold().split())
            hyp = " ".join(hyp.casefold().split())
        c = edit_counts(ref, hyp)
        w = edit_counts(ref.split(), hyp.split())
        per_line.append({"cer": c.rate, "wer": w.rate})
        char_err += c.errors
        char_n += c.reference_length
        word_err += w.errors
        word_n += w.reference_length
    if not per_line:
        raise EvalTextError("no reference/hypothesis pairs")
    return {
        "cer": char_err / char_n,
        "wer": word_err / word_n,
        "cer_macro": sum(p["cer"] for p in per_line) / len(per_line),
        "wer_macro": sum(p["wer"] for p in per_line) / len(per_line),
        "per_line": per_line,
    }


def read_pairs_tsv(path):
    """Paired TSV: one line per sample, reference TAB hypothesis."""
    pairs = []
    with open(path, encoding="utf-8") as f:
        for line_no, raw in enumerate(f, 1):
            line = raw.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise EvalTextError(
                    f"{path}:{line_no}: expected 2 tab-separated fields, "
                    f"got {len(parts)}")
            pairs.append((parts[0], parts[1]))
    return pairs
