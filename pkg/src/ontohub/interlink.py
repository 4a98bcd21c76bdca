"""Alignment of ontology classes with an external linked-data dump.

Matching works offline against a parsed dataset (see ``turtle.parse_dataset``).
Two features produce ``skos:closeMatch`` candidates: equality of normalized
language-tagged labels, and equality of a class's definition URL with a
resource's Wikipedia page URL. Resources are first filtered to a category
scope: the root category plus subcategories up to a depth limit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Iterable

if TYPE_CHECKING:
    from .model import Ontology, OntologyClass

_WHITESPACE_RUN = re.compile(r"\s+")


def normalize_label(text: str) -> str:
    """Case-fold, trim, and collapse internal whitespace. Diacritics stay."""
    return _WHITESPACE_RUN.sub(" ", text.strip()).casefold()


def _trim_slash(url: str) -> str:
    return url[:-1] if url.endswith("/") else url


@dataclass(frozen=True)
class ResourceLabel:
    """Language-tagged label of an external resource (any language tag)."""

    lang: str
    text: str


@dataclass(frozen=True)
class ExternalResource:
    iri: str
    labels: tuple[ResourceLabel, ...] = ()
    primary_topic_of: tuple[str, ...] = ()
    categories: tuple[str, ...] = ()


@dataclass
class ExternalDataset:
    """Resources keyed by IRI plus the category hierarchy.

    ``broader_edges`` holds (category, broader-category) pairs, i.e. the
    direction of the skos:broader assertion.
    """

    resources: dict[str, ExternalResource] = field(default_factory=dict)
    broader_edges: set[tuple[str, str]] = field(default_factory=set)


class MatchMethod(Enum):
    LABEL = "LABEL"
    WIKI_REF = "WIKI_REF"


@dataclass(frozen=True)
class AlignmentLink:
    """One closeMatch candidate. ``evidence`` is the class label text that
    matched, or the shared Wikipedia URL (trailing slash trimmed)."""

    class_id: str
    resource_iri: str
    method: MatchMethod
    evidence: str


@dataclass(frozen=True)
class AlignmentConfig:
    root_category: str
    max_depth: int = 5
    use_labels: bool = True
    use_wikipedia_refs: bool = True
    languages: frozenset[str] = frozenset({"en", "ru"})

    def __post_init__(self):
        if self.max_depth < 0:
            raise ValueError("max_depth must be >= 0")


def category_scope(dataset: ExternalDataset, config: AlignmentConfig) -> set[str]:
    """IRIs of resources belonging to the root category or any subcategory
    within ``max_depth`` narrower-direction hops (root itself is depth 0)."""
    narrower: dict[str, list[str]] = {}
    for cat, broader in dataset.broader_edges:
        narrower.setdefault(broader, []).append(cat)

    in_scope = {config.root_category}
    frontier = [config.root_category]
    for _ in range(config.max_depth):
        if not frontier:
            break
        nxt: list[str] = []
        for cat in frontier:
            for sub in narrower.get(cat, ()):
                if sub not in in_scope:
                    in_scope.add(sub)
                    nxt.append(sub)
        frontier = nxt

    return {
        res.iri
        for res in dataset.resources.values()
        if any(cat in in_scope for cat in res.categories)
    }


def match_class_resource(
    cls: "OntologyClass", resource: ExternalResource, config: AlignmentConfig
) -> list[tuple[MatchMethod, str]]:
    """All (method, evidence) pairs that fire for one class/resource pair,
    LABEL first. At most one hit per method."""
    hits: list[tuple[MatchMethod, str]] = []
    if config.use_labels:
        resource_norms = {
            (lb.lang, normalize_label(lb.text)) for lb in resource.labels
        }
        for label in sorted(cls.labels, key=lambda lb: (lb.lang, lb.text)):
            if label.lang not in config.languages:
                continue
            if (label.lang, normalize_label(label.text)) in resource_norms:
                hits.append((MatchMethod.LABEL, label.text))
                break
    if config.use_wikipedia_refs and cls.definition_url:
        wanted = _trim_slash(cls.definition_url)
        if any(_trim_slash(url) == wanted for url in resource.primary_topic_of):
            hits.append((MatchMethod.WIKI_REF, wanted))
    return hits


def align(
    ontology: "Ontology", dataset: ExternalDataset, config: AlignmentConfig
) -> list[AlignmentLink]:
    """Candidate links for every (class, in-scope resource) pair.

    Each pair yields at most one link; when both features fire, LABEL wins.
    A class may link to several resources and vice versa. Output is sorted
    by (numeric class id, resource IRI) and independent of input order.
    """
    scope_iris = sorted(category_scope(dataset, config))
    in_scope = [dataset.resources[iri] for iri in scope_iris]
    links: list[AlignmentLink] = []
    for class_id in sorted(ontology.classes, key=lambda c: int(c[1:])):
        cls = ontology.classes[class_id]
        for resource in in_scope:
            hits = match_class_resource(cls, resource, config)
            if hits:
                method, evidence = hits[0]
                links.append(AlignmentLink(class_id, resource.iri, method, evidence))
    return links


OMPRO_NS = "http://ontomathpro.org/ontology/"
SKOS_NS = "http://www.w3.org/2004/02/skos/core#"


def emit_closematch(links: Iterable[AlignmentLink]) -> bytes:
    """Turtle document with one skos:closeMatch triple per link, in the
    deterministic order produced by :func:`align`."""
    lines = [
        f"@prefix ompro: <{OMPRO_NS}> .",
        f"@prefix skos: <{SKOS_NS}> .",
        "",
    ]
    for link in links:
        lines.append(f"ompro:{link.class_id} skos:closeMatch <{link.resource_iri}> .")
    return ("\n".join(lines) + "\n").encode("utf-8")
