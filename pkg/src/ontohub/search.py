"""Concept-based formula search over an annotated corpus.

An inverted index maps each concept to its symbol occurrences. Queries
expand the concept set with isa-descendants at query time (cheap toggle,
index stays proportional to occurrences), filter by the hosting segment's
type, and paginate a deterministic (articleId, formulaId, symbol) order.
Suggestions combine ontology label prefix matches with labels of
alignment links, since external resources aligned to the ontology are
also valid entry points.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .corpus import Article, Corpus, Segment, SegmentType, SymbolOccurrence, TextOccurrence
from .interlink import AlignmentLink, MatchMethod, normalize_label
from .model import Ontology, UnknownClassError, class_id_num
from .turtle import ontology_fingerprint


@dataclass(frozen=True)
class IndexedOccurrence:
    """A symbol occurrence denormalized with the context search filters on."""

    article_id: str
    formula_id: str
    symbol: str
    concept_id: str
    segment_type: SegmentType

    def sort_key(self) -> tuple[str, str, str, str]:
        return (self.article_id, self.formula_id, self.symbol, self.concept_id)


@dataclass(frozen=True)
class Index:
    by_concept: dict[str, tuple[IndexedOccurrence, ...]]
    built_against: str  # ontology fingerprint


def build_index_report(corpus: Corpus, ontology: Ontology) -> tuple[Index, list[str]]:
    """Index plus warnings for occurrences of concepts the ontology lacks
    (those are skipped, not indexed)."""
    warnings: list[str] = []
    grouped: dict[str, list[IndexedOccurrence]] = {}
    unknown: set[str] = set()
    for occ in corpus.symbol_occurrences:
        if occ.concept_id not in ontology.classes:
            unknown.add(occ.concept_id)
            continue
        formula = corpus.formulas[occ.formula_id]
        segment = corpus.segments[formula.segment_id]
        grouped.setdefault(occ.concept_id, []).append(
            IndexedOccurrence(
                article_id=segment.article_id,
                formula_id=occ.formula_id,
                symbol=occ.symbol,
                concept_id=occ.concept_id,
                segment_type=segment.type,
            )
        )
    for concept_id in sorted(unknown, key=class_id_num):
        warnings.append(f"unknown concept {concept_id} skipped")
    by_concept = {
        concept: tuple(sorted(occs, key=IndexedOccurrence.sort_key))
        for concept, occs in grouped.items()
    }
    return Index(by_concept, ontology_fingerprint(ontology)), warnings


def build_index(corpus: Corpus, ontology: Ontology) -> Index:
    return build_index_report(corpus, ontology)[0]


@dataclass(frozen=True)
class SearchQuery:
    concept_id: str
    include_subclasses: bool = True
    segment_filter: frozenset[SegmentType] = frozenset()  # empty = all types
    page: int = 1
    page_size: int = 20

    def __post_init__(self):
        if self.page < 1:
            raise ValueError("page must be >= 1")
        if not 1 <= self.page_size <= 100:
            raise ValueError("page_size must be in [1, 100]")


@dataclass(frozen=True)
class SearchHit:
    concept_id: str
    symbol: str
    formula_id: str
    markup: str
    segment_type: SegmentType
    article_id: str


def search(
    index: Index, corpus: Corpus, ontology: Ontology, query: SearchQuery
) -> tuple[int, list[SearchHit]]:
    """Total match count and the requested page of hits.

    The caller must query with the ontology the index was built against
    (snapshots pair them); a page past the end yields an empty list with
    the total still correct.
    """
    concepts = {query.concept_id}
    if query.include_subclasses:
        concepts |= ontology.descendants(query.concept_id)
    elif query.concept_id not in ontology.classes:
        raise UnknownClassError(query.concept_id)

    matched: list[IndexedOccurrence] = []
    for concept in concepts:
        for occ in index.by_concept.get(concept, ()):
            if not query.segment_filter or occ.segment_type in query.segment_filter:
                matched.append(occ)
    matched.sort(key=IndexedOccurrence.sort_key)

    start = (query.page - 1) * query.page_size
    hits = [
        SearchHit(
            concept_id=occ.concept_id,
            symbol=occ.symbol,
            formula_id=occ.formula_id,
            markup=corpus.formulas[occ.formula_id].markup,
            segment_type=occ.segment_type,
            article_id=occ.article_id,
        )
        for occ in matched[start : start + query.page_size]
    ]
    return len(matched), hits


class SuggestionSource(Enum):
    ONTOLOGY = "ONTOLOGY"
    ALIGNED_EXTERNAL = "ALIGNED_EXTERNAL"


@dataclass(frozen=True)
class Suggestion:
    display: str
    source: SuggestionSource
    concept_id: str | None = None
    external_iri: str | None = None


def suggest(
    ontology: Ontology,
    links: list[AlignmentLink],
    prefix: str,
    lang: str,
    limit: int,
) -> list[Suggestion]:
    """Typeahead candidates: ontology label matches in ``lang`` first, then
    label-based alignment links whose evidence matches the prefix.

    Link evidence carries no language tag, so external matches ignore
    ``lang``; that lets a query reach a class through the label it was
    aligned under even when the class lacks a matching label in ``lang``.
    Deduplicated by concept id, shorter (more exact) labels first.
    """
    if not 1 <= limit <= 50:
        raise ValueError("limit must be in [1, 50]")

    suggestions: list[Suggestion] = []
    seen_concepts: set[str] = set()
    for class_id, label in ontology.label_matches(prefix, lang, "prefix"):
        suggestions.append(
            Suggestion(display=label.text, source=SuggestionSource.ONTOLOGY, concept_id=class_id)
        )
        seen_concepts.add(class_id)

    needle = normalize_label(prefix)
    external = [
        link
        for link in links
        if link.method is MatchMethod.LABEL and normalize_label(link.evidence).startswith(needle)
    ]
    external.sort(
        key=lambda lk: (len(normalize_label(lk.evidence)), class_id_num(lk.class_id), lk.resource_iri)
    )
    for link in external:
        if link.class_id in seen_concepts:
            continue
        seen_concepts.add(link.class_id)
        suggestions.append(
            Suggestion(
                display=link.evidence,
                source=SuggestionSource.ALIGNED_EXTERNAL,
                concept_id=link.class_id if link.class_id in ontology.classes else None,
                external_iri=link.resource_iri,
            )
        )

    return suggestions[:limit]


class UnknownFormulaError(KeyError):
    def __init__(self, formula_id: str):
        super().__init__(formula_id)
        self.formula_id = formula_id

    def __str__(self) -> str:
        return f"unknown formula {self.formula_id}"


@dataclass(frozen=True)
class HitDetails:
    formula_id: str
    markup: str
    concepts: tuple[SymbolOccurrence, ...]  # every annotation of this formula
    segment: Segment
    text_occurrences: tuple[TextOccurrence, ...]  # textual mentions in the segment
    article: Article


def hit_details(corpus: Corpus, formula_id: str) -> HitDetails:
    """Everything the result drill-down shows for one formula."""
    formula = corpus.formulas.get(formula_id)
    if formula is None:
        raise UnknownFormulaError(formula_id)
    segment = corpus.segments[formula.segment_id]
    return HitDetails(
        formula_id=formula_id,
        markup=formula.markup,
        concepts=tuple(o for o in corpus.symbol_occurrences if o.formula_id == formula_id),
        segment=segment,
        text_occurrences=tuple(
            o for o in corpus.text_occurrences if o.segment_id == segment.segment_id
        ),
        article=corpus.articles[segment.article_id],
    )
