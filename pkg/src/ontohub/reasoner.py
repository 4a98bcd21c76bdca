"""Forward-chaining materialization of inferable edges, with provenance.

Seven rules close the asserted edge set: isa transitivity, inverse
completion for the paired relations, seeAlso symmetry and transitivity,
solves inheritance over the isa hierarchies (direction configurable per
argument), and the two belongsTo propagation rules. The engine is a
semi-naive worklist; every produced graph is a fixpoint, so applying any
enabled rule to it adds nothing.

Provenance is defined against the fixpoint: an edge is tagged with a rule
iff some non-degenerate instantiation of that rule derives it from edges
of the closure, and tagged "asserted" iff it was in the input. Tags are
therefore deterministic and independent of derivation order.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from enum import Enum

from .model import Edge, Ontology, RelationKind, isa_cycle_groups

ASSERTED = "asserted"


class Rule(Enum):
    ISA_TRANSITIVITY = "ISA_TRANSITIVITY"
    INVERSE_COMPLETION = "INVERSE_COMPLETION"
    SEEALSO_SYMMETRY = "SEEALSO_SYMMETRY"
    SEEALSO_TRANSITIVITY = "SEEALSO_TRANSITIVITY"
    SOLVES_INHERITANCE = "SOLVES_INHERITANCE"
    BELONGSTO_DOWN = "BELONGSTO_DOWN"
    BELONGSTO_FIELD_UP = "BELONGSTO_FIELD_UP"


class Direction(Enum):
    DOWN = "down"
    UP = "up"


@dataclass(frozen=True)
class ReasonerConfig:
    enabled_rules: frozenset[Rule] = frozenset(Rule)
    solves_method_direction: Direction = Direction.DOWN
    solves_problem_direction: Direction = Direction.DOWN


class IsaCycleError(ValueError):
    """The isa graph is not a DAG; materialization refuses to run."""

    def __init__(self, members: list[str]):
        self.members = members
        super().__init__("ISA_CYCLE: isa cycle through " + ", ".join(members))


@dataclass(frozen=True)
class MaterializedGraph:
    """Closed edge set plus per-edge provenance tags.

    A provenance set contains :data:`ASSERTED` and/or :class:`Rule`
    members; an edge without the asserted tag is purely inferred.
    """

    edges: frozenset[Edge]
    provenance: dict[Edge, frozenset]

    def entails(self, edge: Edge) -> bool:
        return edge in self.edges

    def inferred_only(self) -> set[Edge]:
        return {e for e, tags in self.provenance.items() if ASSERTED not in tags}

    @property
    def asserted(self) -> frozenset[Edge]:
        return frozenset(e for e, tags in self.provenance.items() if ASSERTED in tags)


_ISA = RelationKind.ISA
_P5 = RelationKind.SEE_ALSO
_P6 = RelationKind.SOLVES
_P3 = RelationKind.BELONGS_TO
_INVERTIBLE = (
    RelationKind.DEFINES,
    RelationKind.DEFINED_BY,
    RelationKind.BELONGS_TO,
    RelationKind.CONTAINS,
    RelationKind.SOLVES,
    RelationKind.SOLVED_BY,
)


class _Workspace:
    """Edge set with (kind, endpoint) indexes and a pending-edge queue."""

    def __init__(self):
        self.edges: set[Edge] = set()
        self.fwd: dict[tuple[RelationKind, str], set[str]] = defaultdict(set)
        self.rev: dict[tuple[RelationKind, str], set[str]] = defaultdict(set)
        self.queue: deque[Edge] = deque()

    def add(self, subject: str, kind: RelationKind, obj: str) -> None:
        edge = Edge(subject, kind, obj)
        if edge in self.edges:
            return
        self.edges.add(edge)
        self.fwd[(kind, subject)].add(obj)
        self.rev[(kind, obj)].add(subject)
        self.queue.append(edge)


def materialize(ontology: Ontology, config: ReasonerConfig | None = None) -> MaterializedGraph:
    """Fixpoint of the enabled rules over the ontology's asserted edges.

    Raises :class:`IsaCycleError` when the isa graph has a cycle (including
    self-loops); the closure rules assume a DAG.
    """
    config = config or ReasonerConfig()

    loops = sorted({e.subject for e in ontology.edges if e.kind is _ISA and e.subject == e.object})
    if loops:
        raise IsaCycleError(loops)
    groups = isa_cycle_groups(ontology)
    if groups:
        raise IsaCycleError(groups[0])

    rules = config.enabled_rules
    mdir = config.solves_method_direction
    pdir = config.solves_problem_direction

    ws = _Workspace()
    for edge in ontology.edges:
        ws.add(edge.subject, edge.kind, edge.object)

    while ws.queue:
        edge = ws.queue.popleft()
        kind, s, o = edge.kind, edge.subject, edge.object
        if kind is _ISA:
            if Rule.ISA_TRANSITIVITY in rules:
                for c in list(ws.fwd[(_ISA, o)]):
                    ws.add(s, _ISA, c)
                for a in list(ws.rev[(_ISA, s)]):
                    ws.add(a, _ISA, o)
            if Rule.BELONGSTO_DOWN in rules:
                # s isa o: s inherits o's field memberships.
                for f in list(ws.fwd[(_P3, o)]):
                    ws.add(s, _P3, f)
            if Rule.BELONGSTO_FIELD_UP in rules:
                # s isa o within fields: members of s also belong to o.
                for x in list(ws.rev[(_P3, s)]):
                    ws.add(x, _P3, o)
            if Rule.SOLVES_INHERITANCE in rules:
                if mdir is Direction.DOWN:
                    for t in list(ws.fwd[(_P6, o)]):
                        ws.add(s, _P6, t)
                else:
                    for t in list(ws.fwd[(_P6, s)]):
                        ws.add(o, _P6, t)
                if pdir is Direction.DOWN:
                    for m in list(ws.rev[(_P6, o)]):
                        ws.add(m, _P6, s)
                else:
                    for m in list(ws.rev[(_P6, s)]):
                        ws.add(m, _P6, o)
        elif kind is _P5:
            if Rule.SEEALSO_SYMMETRY in rules:
                ws.add(o, _P5, s)
            if Rule.SEEALSO_TRANSITIVITY in rules:
                for z in list(ws.fwd[(_P5, o)]):
                    if z != s:
                        ws.add(s, _P5, z)
                for w in list(ws.rev[(_P5, s)]):
                    if w != o:
                        ws.add(w, _P5, o)
        else:
            if Rule.INVERSE_COMPLETION in rules and kind in _INVERTIBLE:
                ws.add(o, kind.inverse, s)
            if kind is _P6 and Rule.SOLVES_INHERITANCE in rules:
                if mdir is Direction.DOWN:
                    for x in list(ws.rev[(_ISA, s)]):
                        ws.add(x, _P6, o)
                else:
                    for y in list(ws.fwd[(_ISA, s)]):
                        ws.add(y, _P6, o)
                if pdir is Direction.DOWN:
                    for u in list(ws.rev[(_ISA, o)]):
                        ws.add(s, _P6, u)
                else:
                    for v in list(ws.fwd[(_ISA, o)]):
                        ws.add(s, _P6, v)
            elif kind is _P3:
                if Rule.BELONGSTO_DOWN in rules:
                    for x in list(ws.rev[(_ISA, s)]):
                        ws.add(x, _P3, o)
                if Rule.BELONGSTO_FIELD_UP in rules:
                    for g in list(ws.fwd[(_ISA, o)]):
                        ws.add(s, _P3, g)

    provenance = _tag_provenance(set(ontology.edges), ws, config)
    return MaterializedGraph(frozenset(ws.edges), provenance)


def _reach(ws: _Workspace, start: str, up: bool) -> set[str]:
    """isa* set of ``start`` over the closed graph: itself plus everything
    reachable following isa edges upward (up=True) or downward."""
    index = ws.fwd if up else ws.rev
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for node in frontier:
            for other in index.get((_ISA, node), ()):
                if other not in seen:
                    seen.add(other)
                    nxt.append(other)
        frontier = nxt
    return seen


def _tag_provenance(
    asserted: set[Edge], ws: _Workspace, config: ReasonerConfig
) -> dict[Edge, frozenset]:
    rules = config.enabled_rules
    tags: dict[Edge, set] = {e: set() for e in ws.edges}
    for edge in asserted:
        tags[edge].add(ASSERTED)

    # Premise-side isa* caches for solves tagging. Direction DOWN means the
    # conclusion endpoint is at-or-below the premise endpoint, so candidate
    # premises sit in the upward reach of the conclusion (and vice versa).
    method_up = config.solves_method_direction is Direction.DOWN
    problem_up = config.solves_problem_direction is Direction.DOWN
    reach_cache: dict[tuple[str, bool], set[str]] = {}

    def reach(node: str, up: bool) -> set[str]:
        key = (node, up)
        if key not in reach_cache:
            reach_cache[key] = _reach(ws, node, up)
        return reach_cache[key]

    for edge in ws.edges:
        kind, s, o = edge.kind, edge.subject, edge.object
        etags = tags[edge]
        if kind is _ISA:
            if Rule.ISA_TRANSITIVITY in rules and ws.fwd[(_ISA, s)] & ws.rev[(_ISA, o)]:
                etags.add(Rule.ISA_TRANSITIVITY)
        elif kind is _P5:
            if Rule.SEEALSO_SYMMETRY in rules and s != o and Edge(o, _P5, s) in ws.edges:
                etags.add(Rule.SEEALSO_SYMMETRY)
            if (
                Rule.SEEALSO_TRANSITIVITY in rules
                and s != o
                and (ws.fwd[(_P5, s)] & ws.rev[(_P5, o)]) - {s, o}
            ):
                etags.add(Rule.SEEALSO_TRANSITIVITY)
        else:
            if (
                Rule.INVERSE_COMPLETION in rules
                and kind in _INVERTIBLE
                and Edge(o, kind.inverse, s) in ws.edges
            ):
                etags.add(Rule.INVERSE_COMPLETION)
            if kind is _P6 and Rule.SOLVES_INHERITANCE in rules:
                t_candidates = reach(o, problem_up)
                for m in reach(s, method_up):
                    targets = ws.fwd[(_P6, m)] & t_candidates
                    if targets and (m != s or targets - {o}):
                        etags.add(Rule.SOLVES_INHERITANCE)
                        break
            elif kind is _P3:
                if Rule.BELONGSTO_DOWN in rules and ws.fwd[(_ISA, s)] & ws.rev[(_P3, o)]:
                    etags.add(Rule.BELONGSTO_DOWN)
                if Rule.BELONGSTO_FIELD_UP in rules and ws.fwd[(_P3, s)] & ws.rev[(_ISA, o)]:
                    etags.add(Rule.BELONGSTO_FIELD_UP)

    return {edge: frozenset(tag_set) for edge, tag_set in tags.items()}
