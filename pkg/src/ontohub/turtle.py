"""Turtle-subset and triple-line parsing and serialization.

The ontology travels in a deliberately small Turtle subset: prefix
declarations, one block per class, one line per relation triple. Blank
nodes, collections, and nesting are excluded so serialization can be
canonical (classes by numeric id, labels by language then text, edges by
subject/kind/object) and round-trips bit-exact. Parsing recovers at
statement boundaries and reports every error with line and column.

External dataset dumps use a one-triple-per-line format restricted to
the predicates alignment needs: rdfs:label, foaf:primaryTopic (either
direction), dcterms:subject, skos:broader.
"""

from __future__ import annotations

import re
import hashlib
from dataclasses import dataclass
from typing import TYPE_CHECKING, Mapping, NamedTuple

if TYPE_CHECKING:
    from .reasoner import MaterializedGraph

from .interlink import (
    OMPRO_NS,
    SKOS_NS,
    ExternalDataset,
    ExternalResource,
    ResourceLabel,
)
from .model import (
    KIND_BY_PNUM,
    DEFAULT_FIELDS_ROOT,
    DEFAULT_METHOD_ROOT,
    DEFAULT_OBJECTS_ROOT,
    DEFAULT_PROBLEM_ROOT,
    Edge,
    Label,
    Ontology,
    OntologyClass,
    RelationKind,
    class_id_num,
    is_class_id,
)

RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
OWL_NS = "http://www.w3.org/2002/07/owl#"
FOAF_NS = "http://xmlns.com/foaf/0.1/"
DCTERMS_NS = "http://purl.org/dc/terms/"

CANONICAL_PREFIXES = (
    ("ompro", OMPRO_NS),
    ("owl", OWL_NS),
    ("rdfs", RDFS_NS),
    ("skos", SKOS_NS),
)

#: Predicate roles an import alias may map to.
ALIAS_ROLES = frozenset({"isa", "P1", "P2", "P3", "P4", "P5", "P6", "P7", "label", "definition", "isDefinedBy"})

_EDGE_KINDS: dict[str, RelationKind] = {"isa": RelationKind.ISA}
_EDGE_KINDS.update({f"P{p}": kind for p, kind in KIND_BY_PNUM.items()})

LABEL_LANGS = ("en", "ru")


@dataclass(frozen=True)
class ParseError:
    """A positioned diagnostic; also used for non-fatal warnings."""

    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


class RdfParseError(ValueError):
    """Raised by the convenience parsers when the input has errors."""

    def __init__(self, errors: list[ParseError]):
        self.errors = errors
        head = "; ".join(str(e) for e in errors[:3])
        more = f" (+{len(errors) - 3} more)" if len(errors) > 3 else ""
        super().__init__(head + more)


@dataclass
class ParseReport:
    """Outcome of ontology parsing. ``ontology`` is None iff errors exist;
    warnings (unknown predicates) never block."""

    ontology: Ontology | None
    errors: list[ParseError]
    warnings: list[ParseError]


@dataclass
class DatasetReport:
    dataset: ExternalDataset | None
    errors: list[ParseError]


# -- shared literal escaping -------------------------------------------------

_ESCAPES = {'"': '\\"', "\\": "\\\\", "\n": "\\n", "\r": "\\r", "\t": "\\t"}
_UNESCAPES = {'"': '"', "\\": "\\", "n": "\n", "r": "\r", "t": "\t"}


def _escape(text: str) -> str:
    out = []
    for ch in text:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def _unescape(text: str) -> str:
    """Decode backslash escapes; raises ValueError on an unknown escape."""
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= len(text):
            raise ValueError("dangling backslash")
        esc = text[i + 1]
        if esc in _UNESCAPES:
            out.append(_UNESCAPES[esc])
            i += 2
        elif esc in ("u", "U"):
            width = 4 if esc == "u" else 8
            digits = text[i + 2 : i + 2 + width]
            if len(digits) != width or any(d not in "0123456789abcdefABCDEF" for d in digits):
                raise ValueError(f"bad unicode escape \\{esc}{digits}")
            out.append(chr(int(digits, 16)))
            i += 2 + width
        else:
            raise ValueError(f"unsupported escape \\{esc}")
    return "".join(out)


# -- tokenizer ----------------------------------------------------------------


class Token(NamedTuple):
    type: str  # prefix_kw | pname | a | iriref | string | langtag | semi | dot | eof
    value: object
    line: int
    col: int


_WORD = re.compile(r"[A-Za-z][A-Za-z0-9_-]*")
_LOCAL = re.compile(r"[A-Za-z0-9_-]*")
_LANG = re.compile(r"[A-Za-z][A-Za-z0-9-]*")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1
        self.errors: list[ParseError] = []

    def _bump(self, count: int = 1) -> None:
        for _ in range(count):
            if self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def _scan_string(self) -> Token:
        line, col = self.line, self.col
        self._bump()  # opening quote
        out: list[str] = []
        text, n = self.text, len(self.text)
        while self.pos < n:
            ch = text[self.pos]
            if ch == '"':
                self._bump()
                return Token("string", "".join(out), line, col)
            if ch == "\n":
                break
            if ch == "\\":
                if self.pos + 1 >= n:
                    break
                esc = text[self.pos + 1]
                if esc in _UNESCAPES:
                    out.append(_UNESCAPES[esc])
                    self._bump(2)
                elif esc in ("u", "U"):
                    width = 4 if esc == "u" else 8
                    digits = text[self.pos + 2 : self.pos + 2 + width]
                    if len(digits) == width and not any(
                        d not in "0123456789abcdefABCDEF" for d in digits
                    ):
                        out.append(chr(int(digits, 16)))
                        self._bump(2 + width)
                    else:
                        self.errors.append(
                            ParseError(self.line, self.col, f"bad unicode escape \\{esc}{digits}")
                        )
                        self._bump(2)
                else:
                    self.errors.append(
                        ParseError(self.line, self.col, f"unsupported escape \\{esc}")
                    )
                    self._bump(2)
            else:
                out.append(ch)
                self._bump()
        self.errors.append(ParseError(line, col, "unterminated string literal"))
        return Token("string", "".join(out), line, col)

    def _scan_iri(self) -> Token:
        line, col = self.line, self.col
        self._bump()  # "<"
        out: list[str] = []
        text, n = self.text, len(self.text)
        while self.pos < n:
            ch = text[self.pos]
            if ch == ">":
                self._bump()
                return Token("iriref", "".join(out), line, col)
            if ch == "\n":
                break
            out.append(ch)
            self._bump()
        self.errors.append(ParseError(line, col, "unterminated IRI"))
        return Token("iriref", "".join(out), line, col)

    def scan(self) -> list[Token]:
        tokens: list[Token] = []
        text, n = self.text, len(self.text)
        while self.pos < n:
            ch = text[self.pos]
            if ch in " \t\r\n":
                self._bump()
                continue
            if ch == "#":
                while self.pos < n and text[self.pos] != "\n":
                    self._bump()
                continue
            line, col = self.line, self.col
            if ch == "@":
                m = _LANG.match(text, self.pos + 1)
                word = m.group(0) if m else ""
                if not word:
                    self.errors.append(ParseError(line, col, "bare '@'"))
                    self._bump()
                    continue
                self._bump(1 + len(word))
                kind = "prefix_kw" if word == "prefix" else "langtag"
                tokens.append(Token(kind, word, line, col))
            elif ch == "<":
                tokens.append(self._scan_iri())
            elif ch == '"':
                tokens.append(self._scan_string())
            elif ch == ";":
                tokens.append(Token("semi", ";", line, col))
                self._bump()
            elif ch == ".":
                tokens.append(Token("dot", ".", line, col))
                self._bump()
            else:
                m = _WORD.match(text, self.pos)
                if not m:
                    self.errors.append(ParseError(line, col, f"unexpected character {ch!r}"))
                    self._bump()
                    continue
                word = m.group(0)
                self._bump(len(word))
                if self.pos < n and text[self.pos] == ":":
                    self._bump()
                    local = _LOCAL.match(text, self.pos).group(0)
                    self._bump(len(local))
                    tokens.append(Token("pname", (word, local), line, col))
                elif word == "a":
                    tokens.append(Token("a", "a", line, col))
                else:
                    self.errors.append(ParseError(line, col, f"unexpected token {word!r}"))
        tokens.append(Token("eof", "", self.line, self.col))
        return tokens


def _tok_text(tok: Token) -> str:
    if tok.type == "pname":
        return f"{tok.value[0]}:{tok.value[1]}"
    if tok.type == "iriref":
        return f"<{tok.value}>"
    if tok.type == "langtag":
        return f"@{tok.value}"
    if tok.type == "string":
        return "string literal"
    if tok.type == "eof":
        return "end of input"
    return repr(tok.value)


def _predicate_role(iri: str, aliases: Mapping[str, str]) -> str | None:
    if iri == RDFS_NS + "subClassOf":
        return "isa"
    if iri == RDFS_NS + "label":
        return "label"
    if iri == RDFS_NS + "isDefinedBy":
        return "isDefinedBy"
    if iri.startswith(OMPRO_NS):
        local = iri[len(OMPRO_NS) :]
        if local == "definition":
            return "definition"
        if len(local) == 2 and local[0] == "P" and local[1] in "1234567":
            return local
    return aliases.get(iri)


class _TurtleParser:
    def __init__(self, tokens: list[Token], errors: list[ParseError], aliases: Mapping[str, str], ontology: Ontology):
        self.tokens = tokens
        self.i = 0
        self.errors = errors
        self.warnings: list[ParseError] = []
        self.prefixes: dict[str, str] = {}
        self.aliases = aliases
        self.ontology = ontology

    # -- token plumbing --

    def _peek(self) -> Token:
        return self.tokens[self.i]

    def _next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.type != "eof":
            self.i += 1
        return tok

    def _error(self, tok: Token, message: str) -> None:
        self.errors.append(ParseError(tok.line, tok.col, message))

    def _warn(self, tok: Token, message: str) -> None:
        self.warnings.append(ParseError(tok.line, tok.col, message))

    def _skip_past_dot(self) -> None:
        while True:
            tok = self._next()
            if tok.type in ("dot", "eof"):
                return

    def _skip_body_item(self) -> None:
        # Recover to the next ';' (consumed) or the block's '.' (left in place).
        while True:
            tok = self._peek()
            if tok.type in ("dot", "eof"):
                return
            self._next()
            if tok.type == "semi":
                return

    def _expand(self, tok: Token) -> str | None:
        if tok.type == "iriref":
            return tok.value
        prefix, local = tok.value
        ns = self.prefixes.get(prefix)
        if ns is None:
            self._error(tok, f"undeclared prefix {prefix!r}")
            return None
        return ns + local

    def _as_class_id(self, tok: Token) -> str | None:
        if tok.type not in ("pname", "iriref"):
            self._error(tok, f"expected a class reference, found {_tok_text(tok)}")
            return None
        iri = self._expand(tok)
        if iri is None:
            return None
        if iri.startswith(OMPRO_NS) and is_class_id(iri[len(OMPRO_NS) :]):
            return iri[len(OMPRO_NS) :]
        self._error(tok, "expected an ontology class reference (ompro:E<number>)")
        return None

    # -- grammar --

    def parse(self) -> None:
        while True:
            tok = self._peek()
            if tok.type == "eof":
                return
            if tok.type == "prefix_kw":
                self._prefix_decl()
            elif tok.type in ("pname", "iriref"):
                self._statement()
            else:
                self._next()
                self._error(tok, f"unexpected {_tok_text(tok)} at top level")
                self._skip_past_dot()

    def _prefix_decl(self) -> None:
        self._next()  # @prefix
        name = self._next()
        if name.type != "pname" or name.value[1] != "":
            self._error(name, "expected a prefix name like 'ompro:'")
            self._skip_past_dot()
            return
        iri = self._next()
        if iri.type != "iriref":
            self._error(iri, "expected <IRI> in prefix declaration")
            self._skip_past_dot()
            return
        dot = self._next()
        if dot.type != "dot":
            self._error(dot, "expected '.' after prefix declaration")
            if dot.type != "eof":
                self._skip_past_dot()
        self.prefixes[name.value[0]] = iri.value

    def _statement(self) -> None:
        subj_tok = self._next()
        class_id = self._as_class_id(subj_tok)
        if class_id is None:
            self._skip_past_dot()
            return
        tok = self._next()
        if tok.type == "a":
            self._class_block(class_id)
        elif tok.type in ("pname", "iriref"):
            self._edge_triple(class_id, tok)
        else:
            self._error(tok, f"expected 'a' or a predicate, found {_tok_text(tok)}")
            if tok.type not in ("dot", "eof"):
                self._skip_past_dot()

    def _class_block(self, class_id: str) -> None:
        type_tok = self._next()
        type_iri = self._expand(type_tok) if type_tok.type in ("pname", "iriref") else None
        if type_iri != OWL_NS + "Class":
            self._error(type_tok, "expected owl:Class after 'a'")
            self._skip_past_dot()
            return

        labels: list[Label] = []
        definition_text: str | None = None
        definition_url: str | None = None
        edges: list[tuple[RelationKind, str]] = []

        sep = self._next()
        done = sep.type == "dot"
        if not done and sep.type != "semi":
            self._error(sep, "expected ';' or '.' after owl:Class")
            if sep.type != "eof":
                self._skip_past_dot()
            done = True

        while not done:
            tok = self._peek()
            if tok.type == "dot":
                self._next()
                break
            if tok.type == "eof":
                self._error(tok, "unterminated class block")
                break
            if tok.type not in ("pname", "iriref"):
                self._next()
                self._error(tok, f"expected a predicate, found {_tok_text(tok)}")
                self._skip_body_item()
                continue
            pred_tok = self._next()
            pred_iri = self._expand(pred_tok)
            if pred_iri is None:
                self._skip_body_item()
                continue
            role = _predicate_role(pred_iri, self.aliases)
            if role == "label":
                lit = self._next()
                if lit.type != "string":
                    self._error(lit, "rdfs:label needs a quoted literal")
                    self._skip_body_item()
                    continue
                lang_tok = self._peek()
                if lang_tok.type != "langtag":
                    self._error(lit, "label literal needs a language tag (@en or @ru)")
                    self._skip_body_item()
                    continue
                self._next()
                if lang_tok.value not in LABEL_LANGS:
                    self._error(lang_tok, f"unsupported label language @{lang_tok.value}")
                else:
                    labels.append(Label(lang_tok.value, lit.value))
            elif role == "definition":
                lit = self._next()
                if lit.type != "string":
                    self._error(lit, "definition needs a quoted literal")
                    self._skip_body_item()
                    continue
                definition_text = lit.value
            elif role == "isDefinedBy":
                iri_tok = self._next()
                if iri_tok.type != "iriref":
                    self._error(iri_tok, "rdfs:isDefinedBy needs an <IRI>")
                    self._skip_body_item()
                    continue
                definition_url = iri_tok.value
            elif role in _EDGE_KINDS:
                # Relation asserted inside the class description; same meaning
                # as a standalone triple.
                obj = self._as_class_id(self._next())
                if obj is None:
                    self._skip_body_item()
                    continue
                edges.append((_EDGE_KINDS[role], obj))
            else:
                self._warn(pred_tok, f"ignored unknown predicate <{pred_iri}>")
                self._skip_body_item()
                continue
            sep = self._peek()
            if sep.type == "semi":
                self._next()
            elif sep.type not in ("dot", "eof"):
                self._error(sep, f"expected ';' or '.', found {_tok_text(sep)}")
                self._skip_body_item()

        self.ontology.add_class(
            OntologyClass(class_id, tuple(labels), definition_text, definition_url)
        )
        for kind, obj in edges:
            self.ontology.add_edge(class_id, kind, obj)

    def _edge_triple(self, subject: str, pred_tok: Token) -> None:
        pred_iri = self._expand(pred_tok)
        if pred_iri is None:
            self._skip_past_dot()
            return
        role = _predicate_role(pred_iri, self.aliases)
        kind = _EDGE_KINDS.get(role) if role else None
        if kind is None:
            self._warn(pred_tok, f"ignored triple with unknown predicate <{pred_iri}>")
            self._skip_past_dot()
            return
        obj = self._as_class_id(self._next())
        if obj is None:
            self._skip_past_dot()
            return
        dot = self._next()
        if dot.type != "dot":
            self._error(dot, f"expected '.' to end triple, found {_tok_text(dot)}")
            if dot.type != "eof":
                self._skip_past_dot()
        self.ontology.add_edge(subject, kind, obj)


def parse_turtle_report(
    data: bytes | str,
    *,
    predicate_aliases: Mapping[str, str] | None = None,
    fields_root: str = DEFAULT_FIELDS_ROOT,
    objects_root: str = DEFAULT_OBJECTS_ROOT,
    method_root: str | None = DEFAULT_METHOD_ROOT,
    problem_root: str | None = DEFAULT_PROBLEM_ROOT,
) -> ParseReport:
    """Parse the Turtle subset, recovering at statement boundaries.

    ``predicate_aliases`` maps additional full predicate IRIs onto the
    built-in roles (``isa``, ``P1``..``P7``, ``label``, ``definition``,
    ``isDefinedBy``) so exports using different vocabularies can be read.
    """
    aliases = dict(predicate_aliases or {})
    for iri, role in aliases.items():
        if role not in ALIAS_ROLES:
            raise ValueError(f"alias for <{iri}> maps to unknown role {role!r}")
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    scanner = _Scanner(text)
    tokens = scanner.scan()
    ontology = Ontology(
        fields_root=fields_root,
        objects_root=objects_root,
        method_root=method_root,
        problem_root=problem_root,
    )
    parser = _TurtleParser(tokens, list(scanner.errors), aliases, ontology)
    parser.parse()
    errors = sorted(parser.errors, key=lambda e: (e.line, e.column, e.message))
    return ParseReport(None if errors else ontology, errors, parser.warnings)


def parse_turtle(data: bytes | str, **kwargs) -> Ontology:
    """Like :func:`parse_turtle_report` but raises :class:`RdfParseError`."""
    report = parse_turtle_report(data, **kwargs)
    if report.errors:
        raise RdfParseError(report.errors)
    assert report.ontology is not None
    return report.ontology


def serialize_turtle(ontology: Ontology) -> bytes:
    """Canonical byte form: fixed prefix header, class blocks sorted by
    numeric id, labels by (lang, text), then edge triples sorted by
    (subject, kind, object). Reparsing yields an equal ontology."""
    lines = [f"@prefix {prefix}: <{ns}> ." for prefix, ns in CANONICAL_PREFIXES]
    lines.append("")
    for cls in sorted(ontology.classes.values(), key=lambda c: class_id_num(c.id)):
        lines.append(f"ompro:{cls.id} a owl:Class ;")
        for label in sorted(cls.labels, key=lambda lb: (lb.lang, lb.text)):
            lines.append(f'  rdfs:label "{_escape(label.text)}"@{label.lang} ;')
        if cls.definition_text is not None:
            lines.append(f'  ompro:definition "{_escape(cls.definition_text)}" ;')
        if cls.definition_url is not None:
            lines.append(f"  rdfs:isDefinedBy <{cls.definition_url}> ;")
        lines.append("  .")
        lines.append("")
    for edge in sorted(ontology.edges, key=Edge.sort_key):
        lines.append(f"ompro:{edge.subject} {_edge_pred(edge)} ompro:{edge.object} .")
    return ("\n".join(lines).rstrip("\n") + "\n").encode("utf-8")


def _edge_pred(edge: Edge) -> str:
    if edge.kind is RelationKind.ISA:
        return "rdfs:subClassOf"
    return f"ompro:P{edge.kind.pnum}"


def serialize_materialized(ontology: Ontology, graph: "MaterializedGraph") -> bytes:
    """Like :func:`serialize_turtle` but over the closed edge set; inferred
    edges carry a trailing ``# inferred: <RULE, ...>`` comment. The output
    reparses (comments are skipped) to the closed ontology."""
    from .reasoner import ASSERTED  # deferred: reasoner imports this module's peers

    lines = [f"@prefix {prefix}: <{ns}> ." for prefix, ns in CANONICAL_PREFIXES]
    lines.append("")
    for cls in sorted(ontology.classes.values(), key=lambda c: class_id_num(c.id)):
        lines.append(f"ompro:{cls.id} a owl:Class ;")
        for label in sorted(cls.labels, key=lambda lb: (lb.lang, lb.text)):
            lines.append(f'  rdfs:label "{_escape(label.text)}"@{label.lang} ;')
        if cls.definition_text is not None:
            lines.append(f'  ompro:definition "{_escape(cls.definition_text)}" ;')
        if cls.definition_url is not None:
            lines.append(f"  rdfs:isDefinedBy <{cls.definition_url}> ;")
        lines.append("  .")
        lines.append("")
    for edge in sorted(graph.edges, key=Edge.sort_key):
        line = f"ompro:{edge.subject} {_edge_pred(edge)} ompro:{edge.object} ."
        tags = graph.provenance.get(edge, frozenset())
        if ASSERTED not in tags:
            rule_names = ", ".join(sorted(t.value for t in tags))
            line += f"  # inferred: {rule_names}"
        lines.append(line)
    return ("\n".join(lines).rstrip("\n") + "\n").encode("utf-8")


def ontology_fingerprint(ontology: Ontology) -> str:
    """Content hash of the canonical serialization; stable across runs."""
    return hashlib.sha256(serialize_turtle(ontology)).hexdigest()


# -- dataset dumps ------------------------------------------------------------

_TRIPLE_LINE = re.compile(
    r"<([^<>\s]+)>\s+<([^<>\s]+)>\s+"
    r'(?:<([^<>\s]+)>|"((?:[^"\\]|\\.)*)"(?:@([A-Za-z][A-Za-z0-9-]*))?)'
    r"\s*\.\s*$"
)

_LABEL_PRED = RDFS_NS + "label"
_PRIMARY_TOPIC_PRED = FOAF_NS + "primaryTopic"
_IS_PRIMARY_TOPIC_OF_PRED = FOAF_NS + "isPrimaryTopicOf"
_SUBJECT_PRED = DCTERMS_NS + "subject"
_BROADER_PRED = SKOS_NS + "broader"


def parse_dataset_report(data: bytes | str) -> DatasetReport:
    """Parse a triple-per-line dump into an :class:`ExternalDataset`.

    Only the four alignment predicates are interpreted; triples with any
    other predicate are ignored. The result is independent of line order:
    per-resource lists are deduplicated and sorted.
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    errors: list[ParseError] = []
    labels: dict[str, set[ResourceLabel]] = {}
    topics: dict[str, set[str]] = {}
    categories: dict[str, set[str]] = {}
    broader: set[tuple[str, str]] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _TRIPLE_LINE.match(line)
        if not m:
            errors.append(ParseError(lineno, 1, "malformed triple line"))
            continue
        subject, predicate, obj_iri, obj_lit, lang = m.groups()
        if predicate == _LABEL_PRED:
            if obj_lit is None:
                errors.append(ParseError(lineno, 1, "rdfs:label needs a literal object"))
                continue
            if lang is None:
                errors.append(ParseError(lineno, 1, "label literal needs a language tag"))
                continue
            try:
                decoded = _unescape(obj_lit)
            except ValueError as exc:
                errors.append(ParseError(lineno, 1, str(exc)))
                continue
            labels.setdefault(subject, set()).add(ResourceLabel(lang, decoded))
        elif predicate == _PRIMARY_TOPIC_PRED:
            if obj_iri is None:
                errors.append(ParseError(lineno, 1, "foaf:primaryTopic needs an IRI object"))
                continue
            topics.setdefault(obj_iri, set()).add(subject)
        elif predicate == _IS_PRIMARY_TOPIC_OF_PRED:
            if obj_iri is None:
                errors.append(ParseError(lineno, 1, "foaf:isPrimaryTopicOf needs an IRI object"))
                continue
            topics.setdefault(subject, set()).add(obj_iri)
        elif predicate == _SUBJECT_PRED:
            if obj_iri is None:
                errors.append(ParseError(lineno, 1, "dcterms:subject needs an IRI object"))
                continue
            categories.setdefault(subject, set()).add(obj_iri)
        elif predicate == _BROADER_PRED:
            if obj_iri is None:
                errors.append(ParseError(lineno, 1, "skos:broader needs an IRI object"))
                continue
            broader.add((subject, obj_iri))

    if errors:
        return DatasetReport(None, errors)

    dataset = ExternalDataset(broader_edges=broader)
    for iri in sorted(set(labels) | set(topics) | set(categories)):
        dataset.resources[iri] = ExternalResource(
            iri=iri,
            labels=tuple(sorted(labels.get(iri, ()), key=lambda lb: (lb.lang, lb.text))),
            primary_topic_of=tuple(sorted(topics.get(iri, ()))),
            categories=tuple(sorted(categories.get(iri, ()))),
        )
    return DatasetReport(dataset, [])


def parse_dataset(data: bytes | str) -> ExternalDataset:
    """Like :func:`parse_dataset_report` but raises :class:`RdfParseError`."""
    report = parse_dataset_report(data)
    if report.errors:
        raise RdfParseError(report.errors)
    assert report.dataset is not None
    return report.dataset
