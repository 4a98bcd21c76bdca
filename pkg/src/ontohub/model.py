"""In-memory ontology model: bilingual concept classes, typed relations,
taxonomy queries, and validation.

The ontology holds two ISA hierarchies (fields of mathematics and
mathematical knowledge objects) plus seven typed relations between
classes. Instances are immutable after construction: build the ontology
single-threaded, then share it freely across readers.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Literal

from .interlink import normalize_label

CLASS_ID_RE = re.compile(r"E[1-9][0-9]*\Z")

#: Language tags a concept class may carry labels in.
CLASS_LABEL_LANGS = ("en", "ru")


class UnknownClassError(KeyError):
    """Raised when an operation references a class id absent from the ontology."""

    def __init__(self, class_id: str):
        super().__init__(class_id)
        self.class_id = class_id

    def __str__(self) -> str:
        return f"unknown class {self.class_id}"


def is_class_id(value: str) -> bool:
    """True if ``value`` is a well-formed class id (``E`` + positive integer)."""
    return bool(CLASS_ID_RE.match(value))


def class_id_num(class_id: str) -> int:
    """Numeric part of a class id, used for canonical ordering."""
    return int(class_id[1:])


@dataclass(frozen=True, order=True)
class Label:
    """A language-tagged label. Synonyms are multiple labels on one class."""

    lang: str
    text: str


class RelationKind(Enum):
    """Typed relations between classes.

    ``isa`` is the sub-class relation; the rest mirror the P1..P7 object
    properties: defines/definedBy (logical dependency), belongsTo/contains
    (object vs field), seeAlso (symmetric association), solves/solvedBy
    (method vs problem).
    """

    ISA = "isa"
    DEFINES = "defines"
    DEFINED_BY = "definedBy"
    BELONGS_TO = "belongsTo"
    CONTAINS = "contains"
    SEE_ALSO = "seeAlso"
    SOLVES = "solves"
    SOLVED_BY = "solvedBy"

    @property
    def pnum(self) -> int | None:
        """P-number (1..7) of the relation, or None for isa."""
        return _PNUMS[self]

    @property
    def inverse(self) -> "RelationKind | None":
        """The materialized inverse kind, or None (isa has none)."""
        return _INVERSES[self]

    @property
    def sort_index(self) -> int:
        return _KIND_ORDER[self]


_PNUMS = {
    RelationKind.ISA: None,
    RelationKind.DEFINES: 1,
    RelationKind.DEFINED_BY: 2,
    RelationKind.BELONGS_TO: 3,
    RelationKind.CONTAINS: 4,
    RelationKind.SEE_ALSO: 5,
    RelationKind.SOLVES: 6,
    RelationKind.SOLVED_BY: 7,
}
_INVERSES = {
    RelationKind.ISA: None,
    RelationKind.DEFINES: RelationKind.DEFINED_BY,
    RelationKind.DEFINED_BY: RelationKind.DEFINES,
    RelationKind.BELONGS_TO: RelationKind.CONTAINS,
    RelationKind.CONTAINS: RelationKind.BELONGS_TO,
    RelationKind.SEE_ALSO: RelationKind.SEE_ALSO,
    RelationKind.SOLVES: RelationKind.SOLVED_BY,
    RelationKind.SOLVED_BY: RelationKind.SOLVES,
}
_KIND_ORDER = {kind: i for i, kind in enumerate(RelationKind)}

KIND_BY_PNUM = {p: k for k, p in _PNUMS.items() if p is not None}


@dataclass(frozen=True)
class Edge:
    """A relation instance between two classes."""

    subject: str
    kind: RelationKind
    object: str

    def sort_key(self) -> tuple[int, int, int]:
        return (class_id_num(self.subject), self.kind.sort_index, class_id_num(self.object))


@dataclass(frozen=True, eq=False)
class OntologyClass:
    """A concept class: surrogate id, bilingual labels, and a definition
    (inline text, an external link, or both)."""

    id: str
    labels: tuple[Label, ...] = ()
    definition_text: str | None = None
    definition_url: str | None = None

    def label_texts(self, lang: str) -> list[str]:
        return [lb.text for lb in self.labels if lb.lang == lang]

    def _key(self):
        return (self.id, frozenset(self.labels), self.definition_text, self.definition_url)

    def __eq__(self, other: object) -> bool:
        # Label order is irrelevant: a class's labels form a synonym set.
        if not isinstance(other, OntologyClass):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())


class Taxonomy(Enum):
    FIELDS = "fields"
    OBJECTS = "objects"
    UNROOTED = "unrooted"


class ViolationCode(Enum):
    MISSING_LABEL = "MISSING_LABEL"
    MISSING_DEFINITION = "MISSING_DEFINITION"
    ISA_CYCLE = "ISA_CYCLE"
    DANGLING_ENDPOINT = "DANGLING_ENDPOINT"
    BAD_DOMAIN_RANGE = "BAD_DOMAIN_RANGE"
    DUPLICATE_ID = "DUPLICATE_ID"
    SELF_ISA = "SELF_ISA"


_CODE_ORDER = {code: i for i, code in enumerate(ViolationCode)}


@dataclass(frozen=True)
class Violation:
    """One validation finding. Violations are data, not exceptions."""

    code: ViolationCode
    subject_id: str | None
    detail: str

    def sort_key(self) -> tuple[int, int, str]:
        num = class_id_num(self.subject_id) if self.subject_id else 1 << 62
        return (_CODE_ORDER[self.code], num, self.detail)


@dataclass(frozen=True)
class Stats:
    """Counts over asserted (non-materialized) content."""

    class_count: int
    isa_edge_count: int
    other_edge_count: int
    per_kind: dict[RelationKind, int]


DEFAULT_FIELDS_ROOT = "E1"
DEFAULT_OBJECTS_ROOT = "E24"
DEFAULT_METHOD_ROOT = "E449"
DEFAULT_PROBLEM_ROOT = "E339"


class Ontology:
    """Id-keyed class collection plus a set of typed edges.

    Root ids identify the two taxonomies and the method/problem sub-trees;
    they default to the conventional ids but are configurable because test
    fixtures use small synthetic ontologies.
    """

    def __init__(
        self,
        fields_root: str = DEFAULT_FIELDS_ROOT,
        objects_root: str = DEFAULT_OBJECTS_ROOT,
        method_root: str | None = DEFAULT_METHOD_ROOT,
        problem_root: str | None = DEFAULT_PROBLEM_ROOT,
    ):
        self.classes: dict[str, OntologyClass] = {}
        self.edges: set[Edge] = set()
        self.fields_root = fields_root
        self.objects_root = objects_root
        self.method_root = method_root
        self.problem_root = problem_root
        self.duplicate_ids: list[str] = []
        self._parents: dict[str, set[str]] | None = None
        self._children: dict[str, set[str]] | None = None

    # -- construction ------------------------------------------------------

    def add_class(self, cls: OntologyClass) -> None:
        if not is_class_id(cls.id):
            raise ValueError(f"malformed class id {cls.id!r}")
        if cls.id in self.classes:
            # First declaration wins; the duplicate is a validation finding.
            self.duplicate_ids.append(cls.id)
            return
        self.classes[cls.id] = cls
        self._invalidate()

    def add_edge(self, subject: str, kind: RelationKind, object: str) -> None:
        for endpoint in (subject, object):
            if not is_class_id(endpoint):
                raise ValueError(f"malformed class id {endpoint!r}")
        self.edges.add(Edge(subject, kind, object))
        self._invalidate()

    def _invalidate(self) -> None:
        self._parents = None
        self._children = None

    # -- isa adjacency -----------------------------------------------------

    def _isa_maps(self) -> tuple[dict[str, set[str]], dict[str, set[str]]]:
        if self._parents is None or self._children is None:
            parents: dict[str, set[str]] = defaultdict(set)
            children: dict[str, set[str]] = defaultdict(set)
            for edge in self.edges:
                if edge.kind is RelationKind.ISA:
                    parents[edge.subject].add(edge.object)
                    children[edge.object].add(edge.subject)
            self._parents = dict(parents)
            self._children = dict(children)
        return self._parents, self._children

    def _require(self, class_id: str) -> None:
        if class_id not in self.classes:
            raise UnknownClassError(class_id)

    @staticmethod
    def _reachable(start: str, adjacency: dict[str, set[str]]) -> set[str]:
        # Plain BFS; tolerates cycles in not-yet-validated data.
        seen: set[str] = set()
        frontier = [start]
        while frontier:
            nxt: list[str] = []
            for node in frontier:
                for neighbor in adjacency.get(node, ()):
                    if neighbor not in seen:
                        seen.add(neighbor)
                        nxt.append(neighbor)
            frontier = nxt
        seen.discard(start)
        return seen

    # -- queries -----------------------------------------------------------

    def ancestors(self, class_id: str) -> set[str]:
        """Ids reachable from ``class_id`` via one or more isa edges."""
        self._require(class_id)
        parents, _ = self._isa_maps()
        return self._reachable(class_id, parents)

    def descendants(self, class_id: str) -> set[str]:
        """Ids from which ``class_id`` is isa-reachable."""
        self._require(class_id)
        _, children = self._isa_maps()
        return self._reachable(class_id, children)

    def taxonomy_of(self, class_id: str) -> Taxonomy:
        """Which hierarchy the class sits in.

        A class reachable from both roots (flagged by validation) is
        deterministically classified as fields.
        """
        self._require(class_id)
        up = self.ancestors(class_id) | {class_id}
        if self.fields_root in up:
            return Taxonomy.FIELDS
        if self.objects_root in up:
            return Taxonomy.OBJECTS
        return Taxonomy.UNROOTED

    def label_matches(
        self, text: str, lang: str, mode: Literal["exact", "prefix"] = "exact"
    ) -> list[tuple[str, Label]]:
        """Classes whose normalized label in ``lang`` equals (or starts with)
        the normalized query. One entry per class, carrying the shortest
        matching label; sorted by (matched label length, numeric id).
        """
        if mode not in ("exact", "prefix"):
            raise ValueError(f"mode must be 'exact' or 'prefix', got {mode!r}")
        needle = normalize_label(text)
        best: dict[str, Label] = {}
        for cls in self.classes.values():
            for label in cls.labels:
                if label.lang != lang:
                    continue
                norm = normalize_label(label.text)
                hit = norm == needle if mode == "exact" else norm.startswith(needle)
                if not hit:
                    continue
                current = best.get(cls.id)
                if current is None or _label_rank(label) < _label_rank(current):
                    best[cls.id] = label
        return sorted(
            best.items(),
            key=lambda item: (len(normalize_label(item[1].text)), class_id_num(item[0])),
        )

    def find_by_label(
        self, text: str, lang: str, mode: Literal["exact", "prefix"] = "exact"
    ) -> list[str]:
        """Ids of classes matching a label query; see :meth:`label_matches`."""
        return [class_id for class_id, _ in self.label_matches(text, lang, mode)]

    def stats(self) -> Stats:
        per_kind = {kind: 0 for kind in RelationKind}
        for edge in self.edges:
            per_kind[edge.kind] += 1
        isa = per_kind[RelationKind.ISA]
        return Stats(
            class_count=len(self.classes),
            isa_edge_count=isa,
            other_edge_count=len(self.edges) - isa,
            per_kind=per_kind,
        )

    # -- equality ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Ontology):
            return NotImplemented
        return (
            self.classes == other.classes
            and self.edges == other.edges
            and self.fields_root == other.fields_root
            and self.objects_root == other.objects_root
            and self.method_root == other.method_root
            and self.problem_root == other.problem_root
        )

    def __repr__(self) -> str:
        return f"Ontology({len(self.classes)} classes, {len(self.edges)} edges)"


def _label_rank(label: Label) -> tuple[int, str, str]:
    return (len(normalize_label(label.text)), label.lang, label.text)


def isa_cycle_groups(ontology: Ontology) -> list[list[str]]:
    """Strongly connected components of size >= 2 in the isa digraph
    (iterative Tarjan; self-loops are reported separately as SELF_ISA)."""
    graph: dict[str, list[str]] = defaultdict(list)
    nodes: set[str] = set()
    for edge in ontology.edges:
        if edge.kind is RelationKind.ISA and edge.subject != edge.object:
            graph[edge.subject].append(edge.object)
            nodes.add(edge.subject)
            nodes.add(edge.object)

    index: dict[str, int] = {}
    lowlink: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    counter = 0
    groups: list[list[str]] = []

    for root in sorted(nodes):
        if root in index:
            continue
        work = [(root, iter(sorted(graph.get(root, ()))))]
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for succ in it:
                if succ not in index:
                    index[succ] = lowlink[succ] = counter
                    counter += 1
                    stack.append(succ)
                    on_stack.add(succ)
                    work.append((succ, iter(sorted(graph.get(succ, ())))))
                    advanced = True
                    break
                if succ in on_stack:
                    lowlink[node] = min(lowlink[node], index[succ])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
            if lowlink[node] == index[node]:
                component: list[str] = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                if len(component) > 1:
                    groups.append(sorted(component, key=class_id_num))
    return groups


def validate(ontology: Ontology, strict: bool = True) -> list[Violation]:
    """Check every model invariant; empty list means the ontology is sound.

    Structural rules (labels, definitions, duplicate ids, dangling edge
    endpoints, self-isa, isa cycles) always run. Domain/range rules for
    belongsTo and solves edges, and taxonomy disjointness, run only when
    ``strict`` is set.
    """
    found: list[Violation] = []

    for dup in ontology.duplicate_ids:
        found.append(Violation(ViolationCode.DUPLICATE_ID, dup, f"class {dup} declared more than once"))

    for cls in ontology.classes.values():
        langs = set()
        for label in cls.labels:
            if label.lang not in CLASS_LABEL_LANGS:
                found.append(
                    Violation(
                        ViolationCode.MISSING_LABEL,
                        cls.id,
                        f"label language {label.lang!r} not supported (expected en or ru)",
                    )
                )
            elif not label.text.strip():
                found.append(
                    Violation(ViolationCode.MISSING_LABEL, cls.id, f"empty {label.lang} label text")
                )
            else:
                langs.add(label.lang)
        for lang in CLASS_LABEL_LANGS:
            if lang not in langs:
                found.append(Violation(ViolationCode.MISSING_LABEL, cls.id, f"no {lang} label"))
        has_text = bool(cls.definition_text and cls.definition_text.strip())
        has_url = bool(cls.definition_url and cls.definition_url.strip())
        if not (has_text or has_url):
            found.append(
                Violation(ViolationCode.MISSING_DEFINITION, cls.id, "no definition text or definition URL")
            )

    for edge in sorted(ontology.edges, key=Edge.sort_key):
        if edge.kind is RelationKind.ISA and edge.subject == edge.object:
            found.append(
                Violation(ViolationCode.SELF_ISA, edge.subject, f"{edge.subject} isa itself")
            )
        for endpoint in (edge.subject, edge.object):
            if endpoint not in ontology.classes:
                found.append(
                    Violation(
                        ViolationCode.DANGLING_ENDPOINT,
                        edge.subject,
                        f"edge {edge.subject} {edge.kind.value} {edge.object}: unknown class {endpoint}",
                    )
                )

    for group in isa_cycle_groups(ontology):
        found.append(
            Violation(ViolationCode.ISA_CYCLE, group[0], "isa cycle through " + ", ".join(group))
        )

    if strict:
        found.extend(_domain_range_violations(ontology))

    return sorted(found, key=Violation.sort_key)


def _domain_range_violations(ontology: Ontology) -> Iterable[Violation]:
    in_fields = _membership(ontology, ontology.fields_root)
    in_objects = _membership(ontology, ontology.objects_root)

    for class_id in ontology.classes:
        if class_id in in_fields and class_id in in_objects:
            yield Violation(
                ViolationCode.BAD_DOMAIN_RANGE,
                class_id,
                f"{class_id} is reachable from both taxonomy roots",
            )

    check_solves = (
        ontology.method_root in ontology.classes and ontology.problem_root in ontology.classes
    )
    in_methods = _membership(ontology, ontology.method_root) if check_solves else set()
    in_problems = _membership(ontology, ontology.problem_root) if check_solves else set()

    for edge in sorted(ontology.edges, key=Edge.sort_key):
        if edge.subject not in ontology.classes or edge.object not in ontology.classes:
            continue  # already reported as dangling
        if edge.kind is RelationKind.BELONGS_TO and ontology.fields_root in ontology.classes:
            if edge.object not in in_fields:
                yield Violation(
                    ViolationCode.BAD_DOMAIN_RANGE,
                    edge.subject,
                    f"belongsTo object {edge.object} is not in the fields taxonomy",
                )
            if edge.subject in in_fields:
                yield Violation(
                    ViolationCode.BAD_DOMAIN_RANGE,
                    edge.subject,
                    f"belongsTo subject {edge.subject} is itself in the fields taxonomy",
                )
        elif edge.kind is RelationKind.SOLVES and check_solves:
            if edge.subject not in in_methods:
                yield Violation(
                    ViolationCode.BAD_DOMAIN_RANGE,
                    edge.subject,
                    f"solves subject {edge.subject} is not under the method root",
                )
            if edge.object not in in_problems:
                yield Violation(
                    ViolationCode.BAD_DOMAIN_RANGE,
                    edge.subject,
                    f"solves object {edge.object} is not under the problem root",
                )


def _membership(ontology: Ontology, root: str | None) -> set[str]:
    """Root plus every class from which the root is isa-reachable."""
    if root is None or root not in ontology.classes:
        return set()
    return ontology.descendants(root) | {root}
