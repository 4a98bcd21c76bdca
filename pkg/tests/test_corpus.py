import json

import pytest

from ontohub import CorpusLoadError, SegmentType, load_corpus, load_corpus_report


def lines(*records) -> str:
    return "\n".join(json.dumps(r) for r in records)


ARTICLE = {"kind": "article", "articleId": "a1", "title": "T", "authors": ["A"], "year": 2010}
SEGMENT = {"kind": "segment", "segmentId": "s1", "articleId": "a1", "type": "theorem", "text": "t"}
FORMULA = {"kind": "formula", "formulaId": "f1", "segmentId": "s1", "markup": "x=y"}
SYMBOL = {"kind": "symbol", "formulaId": "f1", "symbol": "x", "conceptId": "E847"}
TEXT = {"kind": "text", "segmentId": "s1", "surface": "equation", "conceptId": "E847"}


class TestFixture:
    def test_shape(self, corpus):
        assert set(corpus.articles) == {"a1", "a2"}
        assert len(corpus.segments) == 5
        assert len(corpus.formulas) == 5
        assert len(corpus.symbol_occurrences) == 7
        assert len(corpus.text_occurrences) == 3

    def test_optional_pdf_url(self, corpus):
        assert corpus.articles["a1"].pdf_url is not None
        assert corpus.articles["a2"].pdf_url is None

    def test_unknown_segment_type_folds_to_other(self, corpus):
        assert corpus.segments["s5"].type is SegmentType.OTHER


class TestLoading:
    def test_minimal_valid_stream(self):
        corpus = load_corpus(lines(ARTICLE, SEGMENT, FORMULA, SYMBOL, TEXT))
        assert corpus.symbol_occurrences[0].symbol == "x"
        assert corpus.text_occurrences[0].surface == "equation"

    def test_forward_references_allowed(self):
        # symbol before its formula, formula before its segment, etc.
        corpus = load_corpus(lines(SYMBOL, TEXT, FORMULA, SEGMENT, ARTICLE))
        assert len(corpus.symbol_occurrences) == 1

    def test_blank_lines_skipped(self):
        text = "\n\n" + lines(ARTICLE) + "\n\n  \n" + lines(SEGMENT) + "\n"
        assert len(load_corpus(text).segments) == 1

    def test_accepts_bytes(self):
        assert load_corpus(lines(ARTICLE).encode("utf-8")).articles["a1"].year == 2010


class TestErrors:
    def error_messages(self, text):
        report = load_corpus_report(text)
        assert report.corpus is None
        return [(e.line, e.message) for e in report.errors]

    def test_invalid_json_line_numbered(self):
        errs = self.error_messages(lines(ARTICLE) + "\n{oops\n")
        assert errs[0][0] == 2 and "invalid JSON" in errs[0][1]

    def test_non_object_record(self):
        errs = self.error_messages('["list"]')
        assert "must be a JSON object" in errs[0][1]

    def test_unknown_kind(self):
        errs = self.error_messages(lines({"kind": "chapter"}))
        assert "unknown record kind 'chapter'" in errs[0][1]

    def test_missing_field(self):
        errs = self.error_messages(lines({"kind": "article", "articleId": "a1"}))
        assert any("'title'" in m for _, m in errs)

    def test_year_must_be_int_not_bool(self):
        bad = dict(ARTICLE, year=True)
        errs = self.error_messages(lines(bad))
        assert any("'year'" in m for _, m in errs)

    def test_bad_concept_id(self):
        bad = dict(SYMBOL, conceptId="847")
        errs = self.error_messages(lines(ARTICLE, SEGMENT, FORMULA, bad))
        assert any("class id" in m for _, m in errs)

    def test_duplicate_ids(self):
        errs = self.error_messages(lines(ARTICLE, ARTICLE, SEGMENT, SEGMENT, FORMULA, FORMULA))
        messages = [m for _, m in errs]
        assert any("duplicate article id" in m for m in messages)
        assert any("duplicate segment id" in m for m in messages)
        assert any("duplicate formula id" in m for m in messages)

    def test_dangling_reference(self):
        errs = self.error_messages(lines(ARTICLE, SEGMENT, dict(FORMULA, segmentId="s9")))
        assert any("dangling reference to segment 's9'" in m for _, m in errs)

    def test_load_corpus_raises_with_line_info(self):
        with pytest.raises(CorpusLoadError) as exc:
            load_corpus("{bad json}\n")
        assert exc.value.errors[0].line == 1
        assert "line 1" in str(exc.value)

    def test_errors_sorted_by_line(self):
        report = load_corpus_report("{bad\n" + lines(dict(SYMBOL, formulaId="f9")) + "\nalso bad\n")
        assert [e.line for e in report.errors] == sorted(e.line for e in report.errors)
