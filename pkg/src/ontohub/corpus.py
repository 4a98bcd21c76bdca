"""Annotated article corpus: loading and integrity checking.

The corpus arrives as JSON-Lines, one record per line, discriminated by a
"kind" field: article, segment, formula, symbol, text. Loading validates
field shapes line by line, then cross-checks every reference (segment to
article, formula to segment, occurrence to formula/segment) and id
uniqueness. Formula markup is opaque; annotations arrive precomputed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

from .model import is_class_id


class SegmentType(Enum):
    THEOREM = "theorem"
    LEMMA = "lemma"
    DEFINITION = "definition"
    PROOF = "proof"
    COROLLARY = "corollary"
    REMARK = "remark"
    EXAMPLE = "example"
    OTHER = "other"


_SEGMENT_TYPES = {st.value: st for st in SegmentType}


@dataclass(frozen=True)
class Article:
    article_id: str
    title: str
    authors: tuple[str, ...]
    year: int
    metadata_url: str | None = None
    pdf_url: str | None = None


@dataclass(frozen=True)
class Segment:
    segment_id: str
    article_id: str
    type: SegmentType
    text: str


@dataclass(frozen=True)
class Formula:
    formula_id: str
    segment_id: str
    markup: str


@dataclass(frozen=True)
class SymbolOccurrence:
    formula_id: str
    symbol: str
    concept_id: str


@dataclass(frozen=True)
class TextOccurrence:
    segment_id: str
    surface: str
    concept_id: str


@dataclass
class Corpus:
    articles: dict[str, Article] = field(default_factory=dict)
    segments: dict[str, Segment] = field(default_factory=dict)
    formulas: dict[str, Formula] = field(default_factory=dict)
    symbol_occurrences: tuple[SymbolOccurrence, ...] = ()
    text_occurrences: tuple[TextOccurrence, ...] = ()


@dataclass(frozen=True)
class CorpusError:
    line: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.message}"


class CorpusLoadError(ValueError):
    def __init__(self, errors: list[CorpusError]):
        self.errors = errors
        head = "; ".join(str(e) for e in errors[:3])
        more = f" (+{len(errors) - 3} more)" if len(errors) > 3 else ""
        super().__init__(head + more)


@dataclass
class CorpusReport:
    corpus: Corpus | None
    errors: list[CorpusError]


class _RecordReader:
    """Field extraction with per-record error accumulation."""

    def __init__(self, record: dict, line: int, errors: list[CorpusError]):
        self.record = record
        self.line = line
        self.errors = errors
        self.ok = True

    def _fail(self, message: str) -> None:
        self.errors.append(CorpusError(self.line, message))
        self.ok = False

    def str_field(self, key: str, allow_empty: bool = True) -> str:
        value = self.record.get(key)
        if not isinstance(value, str):
            self._fail(f"field {key!r} must be a string")
            return ""
        if not allow_empty and not value:
            self._fail(f"field {key!r} must be non-empty")
        return value

    def opt_str_field(self, key: str) -> str | None:
        value = self.record.get(key)
        if value is None:
            return None
        if not isinstance(value, str):
            self._fail(f"field {key!r} must be a string when present")
            return None
        return value

    def int_field(self, key: str) -> int:
        value = self.record.get(key)
        if not isinstance(value, int) or isinstance(value, bool):
            self._fail(f"field {key!r} must be an integer")
            return 0
        return value

    def str_list_field(self, key: str) -> tuple[str, ...]:
        value = self.record.get(key)
        if not isinstance(value, list) or any(not isinstance(v, str) for v in value):
            self._fail(f"field {key!r} must be a list of strings")
            return ()
        return tuple(value)

    def concept_field(self, key: str = "conceptId") -> str:
        value = self.str_field(key)
        if self.ok and not is_class_id(value):
            self._fail(f"field {key!r} must be a class id like E660, got {value!r}")
        return value


def load_corpus_report(data: bytes | str) -> CorpusReport:
    """Parse and integrity-check a JSON-Lines corpus.

    All problems are reported with their line numbers: malformed records,
    duplicate ids, and dangling references (which may point forward, so the
    reference check runs after the whole stream is read).
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    errors: list[CorpusError] = []
    corpus = Corpus()
    symbol_occurrences: list[SymbolOccurrence] = []
    text_occurrences: list[TextOccurrence] = []
    # (line, kind, referenced id) pairs to verify once everything is loaded.
    pending_refs: list[tuple[int, str, str]] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        try:
            record = json.loads(stripped)
        except json.JSONDecodeError as exc:
            errors.append(CorpusError(line_no, f"invalid JSON: {exc.msg}"))
            continue
        if not isinstance(record, dict):
            errors.append(CorpusError(line_no, "record must be a JSON object"))
            continue
        kind = record.get("kind")
        reader = _RecordReader(record, line_no, errors)
        if kind == "article":
            article = Article(
                article_id=reader.str_field("articleId", allow_empty=False),
                title=reader.str_field("title"),
                authors=reader.str_list_field("authors"),
                year=reader.int_field("year"),
                metadata_url=reader.opt_str_field("metadataUrl"),
                pdf_url=reader.opt_str_field("pdfUrl"),
            )
            if not reader.ok:
                continue
            if article.article_id in corpus.articles:
                errors.append(CorpusError(line_no, f"duplicate article id {article.article_id!r}"))
            else:
                corpus.articles[article.article_id] = article
        elif kind == "segment":
            type_name = reader.str_field("type")
            segment = Segment(
                segment_id=reader.str_field("segmentId", allow_empty=False),
                article_id=reader.str_field("articleId", allow_empty=False),
                # Unknown segment kinds fold into OTHER by contract.
                type=_SEGMENT_TYPES.get(type_name, SegmentType.OTHER),
                text=reader.str_field("text"),
            )
            if not reader.ok:
                continue
            if segment.segment_id in corpus.segments:
                errors.append(CorpusError(line_no, f"duplicate segment id {segment.segment_id!r}"))
            else:
                corpus.segments[segment.segment_id] = segment
                pending_refs.append((line_no, "article", segment.article_id))
        elif kind == "formula":
            formula = Formula(
                formula_id=reader.str_field("formulaId", allow_empty=False),
                segment_id=reader.str_field("segmentId", allow_empty=False),
                markup=reader.str_field("markup"),
            )
            if not reader.ok:
                continue
            if formula.formula_id in corpus.formulas:
                errors.append(CorpusError(line_no, f"duplicate formula id {formula.formula_id!r}"))
            else:
                corpus.formulas[formula.formula_id] = formula
                pending_refs.append((line_no, "segment", formula.segment_id))
        elif kind == "symbol":
            occurrence = SymbolOccurrence(
                formula_id=reader.str_field("formulaId", allow_empty=False),
                symbol=reader.str_field("symbol", allow_empty=False),
                concept_id=reader.concept_field(),
            )
            if not reader.ok:
                continue
            symbol_occurrences.append(occurrence)
            pending_refs.append((line_no, "formula", occurrence.formula_id))
        elif kind == "text":
            occurrence = TextOccurrence(
                segment_id=reader.str_field("segmentId", allow_empty=False),
                surface=reader.str_field("surface"),
                concept_id=reader.concept_field(),
            )
            if not reader.ok:
                continue
            text_occurrences.append(occurrence)
            pending_refs.append((line_no, "segment", occurrence.segment_id))
        else:
            errors.append(CorpusError(line_no, f"unknown record kind {kind!r}"))

    collections = {
        "article": corpus.articles,
        "segment": corpus.segments,
        "formula": corpus.formulas,
    }
    for line_no, ref_kind, ref_id in pending_refs:
        if ref_id not in collections[ref_kind]:
            errors.append(CorpusError(line_no, f"dangling reference to {ref_kind} {ref_id!r}"))

    if errors:
        return CorpusReport(None, sorted(errors, key=lambda e: (e.line, e.message)))
    corpus.symbol_occurrences = tuple(symbol_occurrences)
    corpus.text_occurrences = tuple(text_occurrences)
    return CorpusReport(corpus, [])


def load_corpus(data: bytes | str) -> Corpus:
    """Like :func:`load_corpus_report` but raises :class:`CorpusLoadError`."""
    report = load_corpus_report(data)
    if report.errors:
        raise CorpusLoadError(report.errors)
    assert report.corpus is not None
    return report.corpus
