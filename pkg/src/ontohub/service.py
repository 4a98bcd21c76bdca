"""Read-only HTTP hub over immutable snapshots.

A snapshot bundles everything a request needs: the parsed ontology, its
materialized closure, the corpus, the search index, and alignment links.
Requests never mutate a snapshot; a reload (POST /admin/reload or SIGHUP
when run via the CLI) builds a fresh snapshot from the configured files
and swaps it in with a single attribute assignment, so in-flight requests
finish on the one they started with.

All JSON bodies are UTF-8 with sorted keys and compact separators, which
makes responses byte-stable and directly comparable with library output.
"""

from __future__ import annotations

import hashlib
import html
import json
import os
import re
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Request, Response

from .corpus import Corpus, SegmentType, load_corpus
from .interlink import OMPRO_NS, AlignmentLink, MatchMethod
from .model import (
    CLASS_ID_RE,
    Ontology,
    OntologyClass,
    RelationKind,
    UnknownClassError,
    class_id_num,
)
from .reasoner import MaterializedGraph, materialize
from .search import (
    HitDetails,
    Index,
    SearchHit,
    SearchQuery,
    Suggestion,
    UnknownFormulaError,
    build_index,
    hit_details,
    search,
    suggest,
)
from .turtle import parse_turtle, serialize_turtle

PORT_ENV_VAR = "ONTOHUB_PORT"


@dataclass(frozen=True)
class ServiceConfig:
    ontology_path: str | Path
    corpus_path: str | Path | None = None
    links_path: str | Path | None = None
    port: int = 8000
    base_iri: str = OMPRO_NS

    def __post_init__(self):
        if not 1 <= self.port <= 65535:
            raise ValueError("port must be in [1, 65535]")


def effective_port(config: ServiceConfig) -> int:
    """Config port, overridable by the ONTOHUB_PORT environment variable."""
    raw = os.environ.get(PORT_ENV_VAR)
    if raw is None:
        return config.port
    port = int(raw)
    if not 1 <= port <= 65535:
        raise ValueError(f"{PORT_ENV_VAR} must be in [1, 65535], got {port}")
    return port


@dataclass(frozen=True)
class Snapshot:
    ontology: Ontology
    graph: MaterializedGraph
    corpus: Corpus
    index: Index
    links: tuple[AlignmentLink, ...]
    content_hash: str


_CLOSEMATCH_LINE = re.compile(
    r"ompro:(E[1-9][0-9]*)\s+skos:closeMatch\s+<([^<>\s]+)>\s*\.\s*$"
)


def load_links(data: bytes | str, ontology: Ontology) -> list[AlignmentLink]:
    """Read alignment links from either supported shape.

    JSON (array or one object per line) keeps full fidelity:
    {"classId", "resourceIri", "method", "evidence"}. The closeMatch
    Turtle form carries no method/evidence, so links are restored as
    LABEL links with evidence backfilled from the class's labels
    (en preferred); lines for classes the ontology lacks are dropped,
    since nothing can vouch for them.
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    stripped = text.lstrip()
    links: list[AlignmentLink] = []
    if stripped.startswith("["):
        for item in json.loads(stripped):
            links.append(_link_from_dict(item))
    elif stripped.startswith("{"):
        for line in text.splitlines():
            line = line.strip()
            if line:
                links.append(_link_from_dict(json.loads(line)))
    else:
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("@prefix") or line.startswith("#"):
                continue
            m = _CLOSEMATCH_LINE.match(line)
            if m is None:
                raise ValueError(f"unrecognized links line: {line!r}")
            class_id, iri = m.groups()
            cls = ontology.classes.get(class_id)
            if cls is None:
                continue
            evidence = _display_label(cls)
            if evidence is None:
                continue
            links.append(AlignmentLink(class_id, iri, MatchMethod.LABEL, evidence))
    return links


def _link_from_dict(item: dict) -> AlignmentLink:
    return AlignmentLink(
        class_id=item["classId"],
        resource_iri=item["resourceIri"],
        method=MatchMethod(item["method"]),
        evidence=item["evidence"],
    )


def links_to_json(links: list[AlignmentLink]) -> list[dict]:
    return [
        {
            "classId": link.class_id,
            "resourceIri": link.resource_iri,
            "method": link.method.value,
            "evidence": link.evidence,
        }
        for link in links
    ]


def _display_label(cls: OntologyClass, lang: str = "en") -> str | None:
    texts = sorted(cls.label_texts(lang)) or sorted(cls.label_texts("ru" if lang == "en" else "en"))
    return texts[0] if texts else None


def build_snapshot(config: ServiceConfig) -> Snapshot:
    """Load all configured artifacts and derive the consistent bundle."""
    hasher = hashlib.sha256()
    ontology_bytes = Path(config.ontology_path).read_bytes()
    hasher.update(ontology_bytes)
    ontology = parse_turtle(ontology_bytes)

    corpus = Corpus()
    if config.corpus_path is not None:
        corpus_bytes = Path(config.corpus_path).read_bytes()
        hasher.update(corpus_bytes)
        corpus = load_corpus(corpus_bytes)

    links: list[AlignmentLink] = []
    if config.links_path is not None:
        links_bytes = Path(config.links_path).read_bytes()
        hasher.update(links_bytes)
        links = load_links(links_bytes, ontology)

    return Snapshot(
        ontology=ontology,
        graph=materialize(ontology),
        corpus=corpus,
        index=build_index(corpus, ontology),
        links=tuple(links),
        content_hash=hasher.hexdigest(),
    )


class Hub:
    """Holds the current snapshot; reload swaps it atomically."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.snapshot = build_snapshot(config)

    def reload(self) -> Snapshot:
        fresh = build_snapshot(self.config)
        self.snapshot = fresh
        return fresh


# -- canonical JSON -----------------------------------------------------------


def canonical_json(payload) -> bytes:
    return json.dumps(
        payload, ensure_ascii=False, sort_keys=True, separators=(",", ":")
    ).encode("utf-8")


def _json_response(payload, status_code: int = 200) -> Response:
    return Response(
        content=canonical_json(payload),
        status_code=status_code,
        media_type="application/json",
    )


def _error(status_code: int, message: str) -> Response:
    return _json_response({"error": message}, status_code)


# -- JSON shapes --------------------------------------------------------------

_KIND_ORDER = {kind: i for i, kind in enumerate(RelationKind)}


def class_to_json(snapshot: Snapshot, class_id: str, base_iri: str) -> dict:
    cls = snapshot.ontology.classes[class_id]
    payload: dict = {
        "classId": class_id,
        "iri": base_iri + class_id,
        "labels": [
            {"lang": lb.lang, "text": lb.text}
            for lb in sorted(cls.labels, key=lambda lb: (lb.lang, lb.text))
        ],
        "edgesOut": [],
        "edgesIn": [],
    }
    if cls.definition_text is not None:
        payload["definitionText"] = cls.definition_text
    if cls.definition_url is not None:
        payload["definitionUrl"] = cls.definition_url
    out = sorted(
        (e for e in snapshot.ontology.edges if e.subject == class_id),
        key=lambda e: (_KIND_ORDER[e.kind], class_id_num(e.object)),
    )
    into = sorted(
        (e for e in snapshot.ontology.edges if e.object == class_id),
        key=lambda e: (_KIND_ORDER[e.kind], class_id_num(e.subject)),
    )
    payload["edgesOut"] = [{"kind": e.kind.value, "target": e.object} for e in out]
    payload["edgesIn"] = [{"kind": e.kind.value, "source": e.subject} for e in into]
    return payload


def _class_to_turtle(snapshot: Snapshot, class_id: str) -> bytes:
    fragment = Ontology()
    fragment.add_class(snapshot.ontology.classes[class_id])
    for edge in snapshot.ontology.edges:
        if class_id in (edge.subject, edge.object):
            fragment.add_edge(edge.subject, edge.kind, edge.object)
    return serialize_turtle(fragment)


def _class_to_html(snapshot: Snapshot, class_id: str, base_iri: str) -> str:
    cls = snapshot.ontology.classes[class_id]
    labels = sorted(cls.labels, key=lambda lb: (lb.lang, lb.text))
    title = next((lb.text for lb in labels if lb.lang == "en"), class_id)
    parts = [
        "<!doctype html>",
        '<html lang="en"><head><meta charset="utf-8">',
        f"<title>{html.escape(title)} ({class_id})</title></head><body>",
        f"<h1>{html.escape(title)} <small>{class_id}</small></h1>",
        f'<p><code>{html.escape(base_iri + class_id)}</code></p>',
        "<ul>",
    ]
    for lb in labels:
        parts.append(f"<li><b>{lb.lang}</b>: {html.escape(lb.text)}</li>")
    parts.append("</ul>")
    if cls.definition_text is not None:
        parts.append(f"<p>{html.escape(cls.definition_text)}</p>")
    if cls.definition_url is not None:
        url = html.escape(cls.definition_url, quote=True)
        parts.append(f'<p><a href="{url}">definition</a></p>')
    payload = class_to_json(snapshot, class_id, base_iri)
    for heading, key, other in (("Relations", "edgesOut", "target"), ("Referenced by", "edgesIn", "source")):
        edges = payload[key]
        if not edges:
            continue
        parts.append(f"<h2>{heading}</h2><ul>")
        for item in edges:
            target = item[other]
            parts.append(
                f'<li>{html.escape(item["kind"])} <a href="/ontology/{target}">{target}</a></li>'
            )
        parts.append("</ul>")
    parts.append("</body></html>")
    return "\n".join(parts)


def hit_to_json(hit: SearchHit) -> dict:
    return {
        "conceptId": hit.concept_id,
        "symbol": hit.symbol,
        "formulaId": hit.formula_id,
        "markup": hit.markup,
        "segmentType": hit.segment_type.value,
        "articleId": hit.article_id,
    }


def suggestion_to_json(item: Suggestion) -> dict:
    payload: dict = {"display": item.display, "source": item.source.value}
    if item.concept_id is not None:
        payload["conceptId"] = item.concept_id
    if item.external_iri is not None:
        payload["externalIri"] = item.external_iri
    return payload


def details_to_json(details: HitDetails) -> dict:
    article: dict = {
        "articleId": details.article.article_id,
        "title": details.article.title,
        "authors": list(details.article.authors),
        "year": details.article.year,
    }
    if details.article.metadata_url is not None:
        article["metadataUrl"] = details.article.metadata_url
    if details.article.pdf_url is not None:
        article["pdfUrl"] = details.article.pdf_url
    return {
        "formulaId": details.formula_id,
        "markup": details.markup,
        "concepts": [
            {"conceptId": occ.concept_id, "symbol": occ.symbol} for occ in details.concepts
        ],
        "segment": {
            "segmentId": details.segment.segment_id,
            "type": details.segment.type.value,
            "text": details.segment.text,
        },
        "textOccurrences": [
            {"surface": occ.surface, "conceptId": occ.concept_id}
            for occ in details.text_occurrences
        ],
        "article": article,
    }


# -- request plumbing ----------------------------------------------------------

_SUPPORTED_MEDIA = ("application/json", "text/turtle", "text/html")

_TRUE_WORDS = {"true", "1", "on", "yes"}
_FALSE_WORDS = {"false", "0", "off", "no"}


def negotiate(accept_header: str | None) -> str | None:
    """First supported media type in the Accept header, honoring wildcards;
    None means nothing acceptable."""
    if not accept_header or not accept_header.strip():
        return "application/json"
    for part in accept_header.split(","):
        media = part.split(";", 1)[0].strip().lower()
        if media in ("*/*", "application/*"):
            return "application/json"
        if media == "text/*":
            return "text/html"
        if media in _SUPPORTED_MEDIA:
            return media
    return None


def create_app(hub: Hub) -> FastAPI:
    app = FastAPI(title="ontohub", docs_url=None, redoc_url=None, openapi_url=None)
    app.state.hub = hub
    base_iri = hub.config.base_iri

    @app.get("/ontology/{class_id}")
    def dereference(class_id: str, request: Request) -> Response:
        if not CLASS_ID_RE.match(class_id):
            return _error(400, f"malformed class id {class_id!r}")
        media = negotiate(request.headers.get("accept"))
        if media is None:
            return _error(406, "supported media types: " + ", ".join(_SUPPORTED_MEDIA))
        snapshot = hub.snapshot
        if class_id not in snapshot.ontology.classes:
            return _error(404, f"unknown class {class_id}")
        if media == "text/turtle":
            return Response(_class_to_turtle(snapshot, class_id), media_type="text/turtle")
        if media == "text/html":
            return Response(
                _class_to_html(snapshot, class_id, base_iri), media_type="text/html"
            )
        return _json_response(class_to_json(snapshot, class_id, base_iri))

    @app.get("/api/lookup")
    def lookup(label: str | None = None, lang: str = "en", mode: str = "exact") -> Response:
        if label is None or not label.strip():
            return _error(400, "missing label parameter")
        if lang not in ("en", "ru"):
            return _error(400, f"lang must be en or ru, got {lang!r}")
        if mode not in ("exact", "prefix"):
            return _error(400, f"mode must be exact or prefix, got {mode!r}")
        snapshot = hub.snapshot
        matches = snapshot.ontology.label_matches(label, lang, mode)  # type: ignore[arg-type]
        return _json_response(
            [
                {"classId": class_id, "iri": base_iri + class_id, "matchedLabel": found.text}
                for class_id, found in matches
            ]
        )

    @app.get("/api/suggest")
    def suggest_endpoint(q: str | None = None, lang: str = "en", limit: str = "10") -> Response:
        if q is None or not q.strip():
            return _error(400, "missing q parameter")
        if lang not in ("en", "ru"):
            return _error(400, f"lang must be en or ru, got {lang!r}")
        try:
            limit_value = int(limit)
        except ValueError:
            return _error(400, f"limit must be an integer, got {limit!r}")
        if not 1 <= limit_value <= 50:
            return _error(400, "limit must be in [1, 50]")
        snapshot = hub.snapshot
        items = suggest(snapshot.ontology, list(snapshot.links), q, lang, limit_value)
        return _json_response([suggestion_to_json(item) for item in items])

    @app.get("/api/search")
    def search_endpoint(
        concept: str | None = None,
        subclasses: str = "true",
        segments: str = "",
        page: str = "1",
        pageSize: str = "20",
    ) -> Response:
        if concept is None or not concept:
            return _error(400, "missing concept parameter")
        if not CLASS_ID_RE.match(concept):
            return _error(400, f"malformed concept id {concept!r}")
        word = subclasses.strip().lower()
        if word in _TRUE_WORDS:
            include_subclasses = True
        elif word in _FALSE_WORDS:
            include_subclasses = False
        else:
            return _error(400, f"subclasses must be a boolean, got {subclasses!r}")
        segment_filter: set[SegmentType] = set()
        for name in segments.split(","):
            name = name.strip()
            if not name:
                continue
            try:
                segment_filter.add(SegmentType(name))
            except ValueError:
                return _error(400, f"unknown segment type {name!r}")
        try:
            page_value, size_value = int(page), int(pageSize)
        except ValueError:
            return _error(400, "page and pageSize must be integers")
        try:
            query = SearchQuery(
                concept_id=concept,
                include_subclasses=include_subclasses,
                segment_filter=frozenset(segment_filter),
                page=page_value,
                page_size=size_value,
            )
        except ValueError as exc:
            return _error(400, str(exc))
        snapshot = hub.snapshot
        try:
            total, hits = search(snapshot.index, snapshot.corpus, snapshot.ontology, query)
        except UnknownClassError:
            return _error(404, f"unknown class {concept}")
        return _json_response(
            {
                "total": total,
                "page": query.page,
                "pageSize": query.page_size,
                "hits": [hit_to_json(hit) for hit in hits],
            }
        )

    @app.get("/api/formulas/{formula_id}")
    def details_endpoint(formula_id: str) -> Response:
        snapshot = hub.snapshot
        try:
            details = hit_details(snapshot.corpus, formula_id)
        except UnknownFormulaError:
            return _error(404, f"unknown formula {formula_id}")
        return _json_response(details_to_json(details))

    @app.post("/admin/reload")
    def reload_endpoint() -> Response:
        fresh = hub.reload()
        return _json_response({"contentHash": fresh.content_hash, "reloaded": True})

    return app
