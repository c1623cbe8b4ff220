import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from legaltopics.corpus import (BoundingBox, CorpusError, ElementClass,
                                PageElement, PageExtraction, Segment,
                                corpus_stats, filter_corpus, parse_page,
                                quantile, reading_order, read_segments,
                                serialize_page, split_page_name,
                                write_segments)
from conftest import element, make_page


def _box(*coords):
    return BoundingBox(*coords)


def _el(bbox, cls=ElementClass.TEXT, text="alpha beta"):
    return PageElement(box=_box(*bbox), element_class=cls, text=text,
                       anonymized_text=text)


class TestParsePage:
    def test_minimal_valid_document(self):
        page = parse_page(make_page([element([10, 10, 500, 100])]))
        assert page.page_name == "doc1_page_1"
        assert len(page.elements) == 1
        assert page.elements[0].element_class is ElementClass.TEXT

    def test_unknown_class_names_index(self):
        with pytest.raises(CorpusError, match="element 0.*Footnote"):
            parse_page(make_page([element([1, 1, 2, 2], cls="Footnote")]))

    def test_degenerate_box(self):
        with pytest.raises(CorpusError, match="degenerate"):
            parse_page(make_page([element([100, 50, 100, 200])]))

    def test_malformed_json(self):
        with pytest.raises(CorpusError, match="malformed"):
            parse_page(b"{not json")

    def test_missing_text_field(self):
        el = element([1, 1, 2, 2])
        del el["anonymized_text"]
        with pytest.raises(CorpusError, match="element 0"):
            parse_page(make_page([el]))

    def test_roundtrip(self):
        raw = make_page([element([10, 10, 500, 100], text="uno"),
                         element([10, 120, 500, 200], cls="Title")])
        page = parse_page(raw)
        again = parse_page(serialize_page(page))
        assert again == page


class TestReadingOrder:
    def test_rows_by_y_then_x(self):
        t = _el([150, 30, 450, 80], text="T")
        a = _el([100, 100, 500, 150], text="A")
        b = _el([100, 200, 500, 400], text="B")
        assert [e.text for e in reading_order([b, a, t])] == ["T", "A", "B"]

    def test_same_row_by_x(self):
        left = _el([100, 100, 290, 150], text="L")
        right = _el([310, 98, 500, 152], text="R")
        assert [e.text for e in reading_order([right, left])] == ["L", "R"]

    def test_single_element(self):
        e = _el([0, 0, 10, 10])
        assert reading_order([e]) == [e]

    def test_empty(self):
        assert reading_order([]) == []

    @given(st.lists(st.tuples(st.integers(0, 500), st.integers(0, 500),
                              st.integers(1, 80), st.integers(1, 80)),
                    max_size=12))
    def test_permutation_and_idempotence(self, raw):
        els = [_el([x, y, x + w, y + h]) for x, y, w, h in raw]
        ordered = reading_order(els)
        assert sorted(map(id, ordered)) == sorted(map(id, els))
        assert reading_order(ordered) == ordered


class TestFilterCorpus:
    def _page(self):
        return PageExtraction(page_name="doc1_page_1", elements=[
            _el([0, 0, 10, 10], text="a b c d e"),
            _el([0, 20, 10, 30], cls=ElementClass.TITLE, text="titolo"),
            _el([0, 40, 10, 50], cls=ElementClass.PAGE_FOOTER, text="3"),
            _el([0, 60, 10, 70], text="f g h i j"),
        ])

    def test_class_filter(self):
        segs = filter_corpus([self._page()], min_quantile=0.0)
        assert len(segs) == 2
        assert all(s.doc_id == "doc1" and s.page_no == 1 for s in segs)

    def test_no_op_filter(self):
        segs = filter_corpus([self._page()], drop_classes=frozenset(),
                             min_quantile=0.0)
        assert len(segs) == 4

    def test_quantile_cut(self):
        page = PageExtraction(page_name="d_p1", elements=[
            _el([0, i * 20, 10, i * 20 + 10], text=" ".join(["w"] * n))
            for i, n in enumerate([5, 10, 20, 40])])
        segs = filter_corpus([page], min_quantile=0.25)
        assert sorted(s.word_count for s in segs) == [10, 20, 40]
        assert quantile([5, 10, 20, 40], 0.25) == pytest.approx(8.75)

    def test_all_filtered_is_error(self):
        page = PageExtraction(page_name="d_p1", elements=[
            _el([0, 0, 10, 10], cls=ElementClass.TITLE)])
        with pytest.raises(CorpusError, match="empty corpus"):
            filter_corpus([page])

    def test_anonymized_flag(self):
        page = PageExtraction(page_name="d_p1", elements=[
            PageElement(box=_box(0, 0, 10, 10),
                        element_class=ElementClass.TEXT,
                        text="Mario Rossi qui", anonymized_text="<PERSONA> qui")])
        segs = filter_corpus([page], min_quantile=0.0, use_anonymized=True)
        assert segs[0].text == "<PERSONA> qui"
        assert segs[0].word_count == 2

    def test_threshold_property(self):
        rng = np.random.default_rng(3)
        page = PageExtraction(page_name="d_p1", elements=[
            _el([0, i * 20, 10, i * 20 + 10],
                text=" ".join(["w"] * int(n)))
            for i, n in enumerate(rng.integers(1, 60, size=30))])
        segs = filter_corpus([page], min_quantile=0.4)
        threshold = quantile([len(e.text.split()) for e in page.elements], 0.4)
        assert all(s.word_count >= threshold for s in segs)


class TestSplitPageName:
    @pytest.mark.parametrize("name,expected", [
        ("doc1_page_3", ("doc1", 3)),
        ("sent-042.p12", ("sent-042", 12)),
        ("giudizio_p7", ("giudizio", 7)),
        ("nopattern", ("nopattern", 1)),
    ])
    def test_patterns(self, name, expected):
        assert split_page_name(name) == expected


class TestStats:
    def _segs(self, counts):
        return [Segment(segment_id=f"d/p001/e{i:03d}", doc_id="d", page_no=1,
                        text=" ".join(["w"] * c), word_count=c)
                for i, c in enumerate(counts)]

    def test_median_odd(self):
        assert corpus_stats(self._segs([1, 2, 3, 4, 5]))["words_median"] == 3

    def test_mean(self):
        assert corpus_stats(self._segs([250, 250]))["words_mean"] == 250

    def test_q1_interpolated(self):
        assert corpus_stats(self._segs([1, 100]))["words_q1"] == pytest.approx(25.75)

    def test_empty_error(self):
        with pytest.raises(CorpusError):
            corpus_stats([])


def test_segment_jsonl_roundtrip(tmp_path):
    segs = [Segment(segment_id="d/p001/e000", doc_id="d", page_no=1,
                    text="cassazione è ammissibile", word_count=3)]
    path = tmp_path / "segments.jsonl"
    write_segments(segs, path)
    line = json.loads(path.read_text(encoding="utf-8").splitlines()[0])
    assert set(line) == {"segment_id", "doc_id", "page_no", "text",
                         "word_count"}
    assert read_segments(path) == segs
